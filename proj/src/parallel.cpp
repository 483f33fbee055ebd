#include "qfichain/parallel.hpp"

#include <cstdlib>
#include <string>

namespace qfi::parallel {

namespace {
thread_local bool t_in_parallel = false;
}

bool in_parallel_region() { return t_in_parallel; }
void set_in_parallel_region(bool value) { t_in_parallel = value; }

std::size_t worker_count() {
  static const std::size_t cached = [] {
    std::size_t hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("QFI_THREADS")) {
      try {
        long v = std::stol(env);
        if (v >= 1) return std::min<std::size_t>(static_cast<std::size_t>(v), 4 * hw);
      } catch (...) {
      }
    }
    return hw;
  }();
  return cached;
}

}  // namespace qfi::parallel

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace qfi::parallel {

/// Worker count: min(QFI_THREADS, hardware_concurrency), at least 1.
std::size_t worker_count();

/// True while the current thread is already inside a map_indexed region;
/// nested maps then run serially instead of oversubscribing.
bool in_parallel_region();
void set_in_parallel_region(bool);

/// Applies fn to every index in [0, n) on a shared pool of workers and
/// returns the results indexed by input position.  Reductions over the
/// returned vector are therefore independent of the thread schedule.
template <typename T>
std::vector<T> map_indexed(std::size_t n, const std::function<T(std::size_t)>& fn) {
  std::vector<T> out(n);
  if (n == 0) return out;
  std::size_t workers = std::min(worker_count(), n);
  if (workers <= 1 || in_parallel_region()) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&]() {
    set_in_parallel_region(true);
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace qfi::parallel

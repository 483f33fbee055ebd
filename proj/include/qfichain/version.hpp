#pragma once

namespace qfi {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qfi

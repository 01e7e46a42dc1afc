#pragma once

#include <string_view>

namespace tomo {

inline constexpr std::string_view kVersion = "0.1.0";

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

}  // namespace tomo

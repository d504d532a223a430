#pragma once

#include <numbers>

namespace twoell {

inline constexpr double pi = std::numbers::pi;
inline constexpr double half_pi = std::numbers::pi / 2;
inline constexpr double two_pi = 2 * std::numbers::pi;

/// Library version recorded in every exported file header.
inline constexpr const char* version = "1.0.0";

}  // namespace twoell

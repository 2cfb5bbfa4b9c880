#pragma once

#include <numbers>

namespace cavitymod {

inline constexpr double kSpeedOfLight = 299792458.0;     // m/s, exact
inline constexpr double kVacuumPermeability = 1.25663706212e-6;  // H/m
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace cavitymod

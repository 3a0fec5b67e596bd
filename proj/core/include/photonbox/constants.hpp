#pragma once

#include <numbers>

namespace photonbox {

/// Planck constant [J s], 2019 SI exact value.
inline constexpr double kPlanck = 6.62607015e-34;

/// Boltzmann constant [J/K], 2019 SI exact value.
inline constexpr double kBoltzmann = 1.380649e-23;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace photonbox

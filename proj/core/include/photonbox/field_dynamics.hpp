#pragma once

#include <cstdint>
#include <vector>

#include "photonbox/rng.hpp"

namespace photonbox {

/// Photon number of the stored field mode, restricted to 0..n_max.
using FockLevel = int;

/// Thermal reservoir coupling of the cavity mode.
struct BathParams {
  double t_cavity = 0.129;  ///< field energy damping time [s]
  double n_therm = 0.063;   ///< mean thermal photon number of the reservoir
  int n_max = 5;            ///< highest retained Fock level

  /// Throws ConfigError unless the parameters describe an admissible
  /// truncated chain: positive damping time, non-negative occupancy,
  /// n_max >= 2, and stationary weight above n_max below 1e-6.
  void validate() const;

  /// Stationary probability mass above the truncation level, i.e. the
  /// modelling error committed by cutting the ladder at n_max.
  double truncation_tail() const;
};

/// One stochastic transition of the photon number.
struct JumpEvent {
  double time = 0.0;
  FockLevel from_n = 0;
  FockLevel to_n = 0;
};

/// Piecewise-constant photon-number record over [0, duration].
struct FieldTrajectory {
  FockLevel initial_n = 0;
  double duration = 0.0;
  std::uint64_t seed = 0;
  std::vector<JumpEvent> events;  ///< strictly increasing times, unit steps

  /// Photon number at time t (right-continuous at jump instants).
  FockLevel state_at(double t) const;
  FockLevel final_state() const;
};

/// Transition rates out of Fock level n [1/s].
struct JumpRates {
  double up = 0.0;    ///< n -> n+1 (thermal excitation)
  double down = 0.0;  ///< n -> n-1 (photon loss)
  double total() const { return up + down; }
};

/// Probability distribution over Fock levels 0..n_max.
struct FockDistribution {
  std::vector<double> p;

  int n_max() const { return static_cast<int>(p.size()) - 1; }
  double mean() const;
  /// Throws NumericalError unless entries are non-negative and sum to one
  /// within 1e-12.
  void validate() const;
};

/// Rates for leaving level n. The upward rate vanishes at n_max so that the
/// truncated chain conserves probability; the downward rate vanishes at 0.
JumpRates jump_rates(FockLevel n, const BathParams& bath);

/// Exact stochastic realisation of the birth-death chain from a definite
/// initial level. Identical (seed, parameters) give an identical event list.
FieldTrajectory sample_trajectory(FockLevel initial_n, double duration,
                                  const BathParams& bath, std::uint64_t seed);

/// Same, but the initial level is drawn from `initial` using the leading
/// random draw of the stream.
FieldTrajectory sample_trajectory(const FockDistribution& initial, double duration,
                                  const BathParams& bath, std::uint64_t seed);

/// Deterministic evolution of the level populations under the same
/// gain/loss rates as the stochastic sampler. Returns one distribution per
/// grid point; t_grid must be strictly increasing and start at 0, where the
/// initial distribution itself is reported. Normalisation is checked to
/// 1e-9 at every grid point.
std::vector<FockDistribution> master_equation_evolve(const FockDistribution& p0,
                                                     const BathParams& bath,
                                                     const std::vector<double>& t_grid);

/// Geometric thermal distribution truncated at n_max and renormalised.
FockDistribution stationary_distribution(const BathParams& bath);

/// Mean thermal photon number of a mode at `frequency_hz` in equilibrium
/// with a reservoir at `temperature_k`.
double planck_occupation(double frequency_hz, double temperature_k);

}  // namespace photonbox

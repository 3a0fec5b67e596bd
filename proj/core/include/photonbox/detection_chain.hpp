#pragma once

#include <cstdint>
#include <vector>

#include "photonbox/field_dynamics.hpp"
#include "photonbox/probe_physics.hpp"

namespace photonbox {

/// Slotted probe arrivals: slot k sits at t = k * slot_period and carries a
/// usable atom with probability `occupancy`, independently per slot.
struct ArrivalParams {
  double slot_period = 70.0e-6;  ///< [s]
  double occupancy = 0.063;      ///< detected atoms per slot

  double rate() const { return occupancy / slot_period; }  ///< mean atoms per second
  void validate() const;
};

/// Readout imperfections. The assignment error is an affine fringe-contrast
/// reduction: P(g|n) = p_g_given_1 + contrast * P_ideal(g|n).
struct DetectorParams {
  double p_g_given_1 = 0.13;   ///< wrong-way probability on the one-photon fringe
  double p_e_given_0 = 0.09;   ///< wrong-way probability on the empty fringe
  double emission_prob = 0.0;  ///< probability per atom of depositing a photon

  double contrast() const { return 1.0 - p_g_given_1 - p_e_given_0; }
  void validate() const;
};

enum class AtomState : char { E = 'E', G = 'G' };

/// One probe atom: when it crossed, what the field held, what was read out.
struct AtomRecord {
  double time = 0.0;
  FockLevel true_n = 0;
  AtomState detected = AtomState::G;
};

/// Probability of reading g given n photons, fringe errors included.
double detection_probability_g(FockLevel n, const DetectorParams& det,
                               const PhaseTable& table);

/// Samples the probe readout of a fixed, already generated trajectory.
/// Atom times are exact slot multiples inside [0, traj.duration).
std::vector<AtomRecord> sample_detection_stream(const FieldTrajectory& traj,
                                                const ArrivalParams& arr,
                                                const DetectorParams& det,
                                                const PhaseTable& table,
                                                std::uint64_t seed);

/// A trajectory evolved together with its probe stream, so that atoms can
/// act back on the field (photon deposition with DetectorParams::emission_prob).
struct MonitoredRun {
  FieldTrajectory trajectory;
  std::vector<AtomRecord> atoms;
  std::vector<double> injection_times;  ///< deposits recorded as up-jumps
  long clamped = 0;                     ///< deposits suppressed at n_max

  long injections() const { return static_cast<long>(injection_times.size()); }
};

/// Couples the field sampler and the probe stream under one seed. The field
/// draws come from substream 0 and the probe draws from substream 1, so with
/// emission_prob = 0 the trajectory is bit-identical to
/// sample_trajectory(initial_n, duration, bath, derive_seed(seed, 0)).
MonitoredRun sample_monitored_trajectory(FockLevel initial_n, double duration,
                                         const BathParams& bath,
                                         const ArrivalParams& arr,
                                         const DetectorParams& det,
                                         const PhaseTable& table,
                                         std::uint64_t seed);

}  // namespace photonbox

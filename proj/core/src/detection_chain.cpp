#include "photonbox/detection_chain.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "photonbox/errors.hpp"

namespace photonbox {

void ArrivalParams::validate() const {
  if (!(slot_period > 0.0))
    throw ConfigError("slot_period_us: slot length must be positive");
  if (!(occupancy > 0.0) || occupancy > 1.0)
    throw ConfigError("occupancy: atoms per slot must lie in (0, 1]");
}

void DetectorParams::validate() const {
  if (!(p_g_given_1 >= 0.0) || p_g_given_1 >= 0.5)
    throw ConfigError("p_g_given_1: assignment error must lie in [0, 0.5)");
  if (!(p_e_given_0 >= 0.0) || p_e_given_0 >= 0.5)
    throw ConfigError("p_e_given_0: assignment error must lie in [0, 0.5)");
  if (!(contrast() > 0.0))
    throw ConfigError("detector: fringe contrast must stay positive");
  if (!(emission_prob >= 0.0) || emission_prob > 1.0e-4)
    throw ConfigError("emission_prob: deposition must stay perturbative, in [0, 1e-4]");
}

double detection_probability_g(FockLevel n, const DetectorParams& det,
                               const PhaseTable& table) {
  if (n < 0 || n > table.n_max())
    throw NumericalError("detection_probability_g: level " + std::to_string(n) +
                         " outside the phase table");
  return det.p_g_given_1 + det.contrast() * ideal_detection_probability(n, table);
}

std::vector<AtomRecord> sample_detection_stream(const FieldTrajectory& traj,
                                                const ArrivalParams& arr,
                                                const DetectorParams& det,
                                                const PhaseTable& table,
                                                std::uint64_t seed) {
  arr.validate();
  det.validate();

  std::vector<AtomRecord> atoms;
  atoms.reserve(static_cast<std::size_t>(traj.duration * arr.rate() * 1.1) + 16);

  Rng rng(seed);
  std::uint64_t slot = rng.geometric_failures(arr.occupancy);
  // Walking the events alongside the slots keeps the lookup O(1) per atom.
  std::size_t next_event = 0;
  FockLevel n = traj.initial_n;
  while (true) {
    double t = static_cast<double>(slot) * arr.slot_period;
    if (t >= traj.duration) break;
    while (next_event < traj.events.size() && traj.events[next_event].time <= t) {
      n = traj.events[next_event].to_n;
      ++next_event;
    }
    AtomState s = rng.bernoulli(detection_probability_g(n, det, table))
                      ? AtomState::G
                      : AtomState::E;
    atoms.push_back({t, n, s});
    slot += 1 + rng.geometric_failures(arr.occupancy);
  }
  return atoms;
}

MonitoredRun sample_monitored_trajectory(FockLevel initial_n, double duration,
                                         const BathParams& bath,
                                         const ArrivalParams& arr,
                                         const DetectorParams& det,
                                         const PhaseTable& table,
                                         std::uint64_t seed) {
  bath.validate();
  arr.validate();
  det.validate();
  if (initial_n < 0 || initial_n > bath.n_max)
    throw ConfigError("sample_monitored_trajectory: initial level outside 0..n_max");
  if (table.n_max() < bath.n_max)
    throw ConfigError("sample_monitored_trajectory: phase table shorter than the ladder");

  MonitoredRun run;
  run.trajectory.initial_n = initial_n;
  run.trajectory.duration = duration;
  run.trajectory.seed = seed;
  run.atoms.reserve(static_cast<std::size_t>(duration * arr.rate() * 1.1) + 16);

  Rng field_rng(derive_seed(seed, 0));
  Rng atom_rng(derive_seed(seed, 1));

  FockLevel n = initial_n;
  double t_now = 0.0;
  double t_jump = 0.0;
  double p_up = 0.0;

  auto draw_jump = [&]() {
    JumpRates r = jump_rates(n, bath);
    double total = r.total();
    if (total <= 0.0) {
      t_jump = std::numeric_limits<double>::infinity();
      p_up = 0.0;
    } else {
      t_jump = t_now + field_rng.exponential(total);
      p_up = r.up / total;
    }
  };
  draw_jump();

  std::uint64_t slot = atom_rng.geometric_failures(arr.occupancy);
  double t_atom = static_cast<double>(slot) * arr.slot_period;

  while (true) {
    if (t_jump < duration && t_jump <= t_atom) {
      FockLevel next = field_rng.bernoulli(p_up) ? n + 1 : n - 1;
      run.trajectory.events.push_back({t_jump, n, next});
      n = next;
      t_now = t_jump;
      draw_jump();
    } else if (t_atom < duration) {
      AtomState s = atom_rng.bernoulli(detection_probability_g(n, det, table))
                        ? AtomState::G
                        : AtomState::E;
      run.atoms.push_back({t_atom, n, s});
      if (det.emission_prob > 0.0 && atom_rng.bernoulli(det.emission_prob)) {
        if (n < bath.n_max) {
          run.trajectory.events.push_back({t_atom, n, n + 1});
          run.injection_times.push_back(t_atom);
          ++n;
          t_now = t_atom;
          draw_jump();  // holding time restarts; the chain is memoryless
        } else {
          ++run.clamped;
        }
      }
      slot += 1 + atom_rng.geometric_failures(arr.occupancy);
      t_atom = static_cast<double>(slot) * arr.slot_period;
    } else {
      break;
    }
  }
  return run;
}

}  // namespace photonbox

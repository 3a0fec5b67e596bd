#include "photonbox/field_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "photonbox/constants.hpp"
#include "photonbox/errors.hpp"
#include "photonbox/ode.hpp"

namespace photonbox {

namespace {
constexpr double kTailLimit = 1.0e-6;
}

double BathParams::truncation_tail() const {
  if (n_therm <= 0.0) return 0.0;
  double ratio = n_therm / (1.0 + n_therm);
  return std::pow(ratio, n_max + 1);
}

void BathParams::validate() const {
  if (!(t_cavity > 0.0))
    throw ConfigError("t_cavity_s: damping time must be positive");
  if (!(n_therm >= 0.0))
    throw ConfigError("n_therm: thermal occupancy must be non-negative");
  if (n_max < 2)
    throw ConfigError("n_max: at least levels 0..2 are required");
  if (truncation_tail() >= kTailLimit)
    throw ConfigError("n_max: stationary weight above the truncation level is " +
                      std::to_string(truncation_tail()) +
                      ", exceeding 1e-6; raise n_max or lower n_therm");
}

FockLevel FieldTrajectory::state_at(double t) const {
  FockLevel n = initial_n;
  for (const auto& ev : events) {
    if (ev.time > t) break;
    n = ev.to_n;
  }
  return n;
}

FockLevel FieldTrajectory::final_state() const {
  return events.empty() ? initial_n : events.back().to_n;
}

double FockDistribution::mean() const {
  double m = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) m += static_cast<double>(n) * p[n];
  return m;
}

void FockDistribution::validate() const {
  if (p.empty()) throw NumericalError("FockDistribution: empty");
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw NumericalError("FockDistribution: negative entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1.0e-12)
    throw NumericalError("FockDistribution: not normalised, sum=" + std::to_string(sum));
}

JumpRates jump_rates(FockLevel n, const BathParams& bath) {
  if (n < 0 || n > bath.n_max)
    throw NumericalError("jump_rates: level " + std::to_string(n) + " outside 0.." +
                         std::to_string(bath.n_max));
  JumpRates r;
  r.down = (1.0 + bath.n_therm) * static_cast<double>(n) / bath.t_cavity;
  r.up = n < bath.n_max
             ? bath.n_therm * static_cast<double>(n + 1) / bath.t_cavity
             : 0.0;
  return r;
}

FieldTrajectory sample_trajectory(FockLevel initial_n, double duration,
                                  const BathParams& bath, std::uint64_t seed) {
  if (initial_n < 0 || initial_n > bath.n_max)
    throw ConfigError("sample_trajectory: initial level outside 0..n_max");
  if (!(duration >= 0.0))
    throw ConfigError("sample_trajectory: negative duration");

  FieldTrajectory traj;
  traj.initial_n = initial_n;
  traj.duration = duration;
  traj.seed = seed;

  Rng rng(seed);
  FockLevel n = initial_n;
  double t = 0.0;
  while (true) {
    JumpRates r = jump_rates(n, bath);
    double total = r.total();
    if (total <= 0.0) break;
    t += rng.exponential(total);
    if (t >= duration) break;
    FockLevel next = rng.bernoulli(r.up / total) ? n + 1 : n - 1;
    traj.events.push_back({t, n, next});
    n = next;
  }
  return traj;
}

FieldTrajectory sample_trajectory(const FockDistribution& initial, double duration,
                                  const BathParams& bath, std::uint64_t seed) {
  initial.validate();
  if (initial.n_max() != bath.n_max)
    throw ConfigError("sample_trajectory: initial distribution has " +
                      std::to_string(initial.p.size()) + " levels, bath expects " +
                      std::to_string(bath.n_max + 1));

  // The categorical draw is made from a seed-derived substream so the
  // jump stream itself stays aligned with the definite-level overload.
  Rng pick(derive_seed(seed, 0x10ADull));
  double u = pick.uniform();
  FockLevel n0 = 0;
  double acc = 0.0;
  for (std::size_t n = 0; n < initial.p.size(); ++n) {
    acc += initial.p[n];
    if (u < acc) {
      n0 = static_cast<FockLevel>(n);
      break;
    }
    n0 = static_cast<FockLevel>(n);  // saturates at n_max if acc < 1 by rounding
  }
  return sample_trajectory(n0, duration, bath, seed);
}

std::vector<FockDistribution> master_equation_evolve(const FockDistribution& p0,
                                                     const BathParams& bath,
                                                     const std::vector<double>& t_grid) {
  p0.validate();
  if (p0.n_max() != bath.n_max)
    throw ConfigError("master_equation_evolve: distribution/bath level mismatch");
  if (t_grid.empty() || t_grid.front() != 0.0)
    throw ConfigError("master_equation_evolve: time grid must start at 0");

  const int n_max = bath.n_max;
  std::vector<double> up(n_max + 1), down(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    JumpRates r = jump_rates(n, bath);
    up[n] = r.up;
    down[n] = r.down;
  }

  auto rhs = [&](double, const std::vector<double>& p, std::vector<double>& dp) {
    for (int n = 0; n <= n_max; ++n) {
      double gain = 0.0;
      if (n > 0) gain += up[n - 1] * p[n - 1];
      if (n < n_max) gain += down[n + 1] * p[n + 1];
      dp[n] = gain - (up[n] + down[n]) * p[n];
    }
  };

  auto states = integrate_ode(rhs, p0.p, t_grid);

  std::vector<FockDistribution> out;
  out.reserve(states.size());
  for (std::size_t k = 0; k < states.size(); ++k) {
    double sum = 0.0;
    for (double v : states[k]) sum += v;
    if (std::abs(sum - 1.0) > 1.0e-9)
      throw NumericalError("master_equation_evolve: normalisation drifted to " +
                           std::to_string(sum) + " at t=" + std::to_string(t_grid[k]));
    out.push_back(FockDistribution{std::move(states[k])});
  }
  return out;
}

FockDistribution stationary_distribution(const BathParams& bath) {
  FockDistribution d;
  d.p.resize(bath.n_max + 1);
  if (bath.n_therm <= 0.0) {
    d.p[0] = 1.0;
    return d;
  }
  double ratio = bath.n_therm / (1.0 + bath.n_therm);
  double w = 1.0, sum = 0.0;
  for (int n = 0; n <= bath.n_max; ++n) {
    d.p[n] = w;
    sum += w;
    w *= ratio;
  }
  for (double& v : d.p) v /= sum;
  return d;
}

double planck_occupation(double frequency_hz, double temperature_k) {
  if (!(frequency_hz > 0.0))
    throw ConfigError("planck_occupation: frequency must be positive");
  if (!(temperature_k > 0.0))
    throw ConfigError("planck_occupation: temperature must be positive");
  double x = kPlanck * frequency_hz / (kBoltzmann * temperature_k);
  return 1.0 / std::expm1(x);
}

}  // namespace photonbox

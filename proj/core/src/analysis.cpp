#include "photonbox/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "photonbox/errors.hpp"

namespace photonbox {

void PreparationSpec::validate() const {
  if (!(residual_error >= 0.0) || residual_error >= 0.5)
    throw ConfigError("residual_error: preparation error must lie in [0, 0.5)");
}

int PreparationSpec::target_level() const {
  switch (target) {
    case PrepTarget::vacuum_reset: return 0;
    case PrepTarget::fock_one: return 1;
    case PrepTarget::thermal: break;
  }
  throw ConfigError("preparation: thermal equilibrium has no target level");
}

FockDistribution prepare_initial(const PreparationSpec& prep, const BathParams& bath) {
  prep.validate();
  bath.validate();
  if (prep.target == PrepTarget::thermal) return stationary_distribution(bath);

  FockDistribution d;
  d.p.assign(bath.n_max + 1, 0.0);
  int level = prep.target_level();
  int other = level == 0 ? 1 : 0;
  d.p[level] = 1.0 - prep.residual_error;
  d.p[other] = prep.residual_error;
  return d;
}

EnsembleCurve ensemble_p1(const std::vector<FieldTrajectory>& trajectories,
                          const std::vector<double>& t_grid) {
  if (trajectories.empty()) throw ConfigError("ensemble_p1: no trajectories");
  if (t_grid.empty()) throw ConfigError("ensemble_p1: empty time grid");
  double duration = trajectories.front().duration;
  for (const auto& traj : trajectories) {
    if (std::abs(traj.duration - duration) > 1.0e-12)
      throw ConfigError("ensemble_p1: trajectories have mismatched durations");
  }
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    if (t_grid[k] < 0.0 || t_grid[k] > duration)
      throw ConfigError("ensemble_p1: grid point outside [0, duration]");
    if (k > 0 && !(t_grid[k] > t_grid[k - 1]))
      throw ConfigError("ensemble_p1: grid must be strictly increasing");
  }

  const double n = static_cast<double>(trajectories.size());
  EnsembleCurve curve;
  curve.t_grid = t_grid;
  curve.n_trajectories = static_cast<int>(trajectories.size());
  curve.mean.resize(t_grid.size());
  curve.std_error.resize(t_grid.size());

  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    double sum = 0.0;
    for (const auto& traj : trajectories)
      sum += traj.state_at(t_grid[k]) == 1 ? 1.0 : 0.0;
    double p = sum / n;
    curve.mean[k] = p;
    curve.std_error[k] = n > 1 ? std::sqrt(p * (1.0 - p) / (n - 1.0)) : 0.0;
  }
  return curve;
}

EnsembleCurve ensemble_p1(const std::vector<DecodedTrace>& traces,
                          const std::vector<double>& t_grid) {
  if (traces.empty()) throw ConfigError("ensemble_p1: no traces");
  if (t_grid.empty()) throw ConfigError("ensemble_p1: empty time grid");
  for (std::size_t k = 1; k < t_grid.size(); ++k)
    if (!(t_grid[k] > t_grid[k - 1]))
      throw ConfigError("ensemble_p1: grid must be strictly increasing");
  for (const auto& trace : traces) {
    if (trace.samples.empty())
      throw ConfigError("ensemble_p1: trace without probe atoms");
    if (t_grid.back() > trace.samples.back().time)
      throw ConfigError("ensemble_p1: grid extends past the observed span of a trace");
  }

  const double n = static_cast<double>(traces.size());
  EnsembleCurve curve;
  curve.t_grid = t_grid;
  curve.n_trajectories = static_cast<int>(traces.size());
  curve.mean.resize(t_grid.size());
  curve.std_error.resize(t_grid.size());

  // One ordered pass per trace over the grid.
  std::vector<double> sums(t_grid.size(), 0.0);
  for (const auto& trace : traces) {
    std::size_t s = 0;
    int value = 0;
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
      while (s < trace.samples.size() && trace.samples[s].time <= t_grid[k]) {
        value = trace.samples[s].inferred;
        ++s;
      }
      sums[k] += value;
    }
  }
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    double p = sums[k] / n;
    curve.mean[k] = p;
    curve.std_error[k] = n > 1 ? std::sqrt(p * (1.0 - p) / (n - 1.0)) : 0.0;
  }
  return curve;
}

namespace {

FirstJumpResult finish_first_jump(FirstJumpResult result) {
  result.mle = fit_exponential_mle(result.event_times, result.censored_times);
  result.binned = fit_exponential_binned(result.event_times, result.mle.tau);
  return result;
}

}  // namespace

FirstJumpResult first_jump_histogram(const std::vector<FieldTrajectory>& trajectories,
                                     const PreparationSpec& prep) {
  const int level = prep.target_level();
  FirstJumpResult result;
  for (const auto& traj : trajectories) {
    if (traj.initial_n != level) {
      ++result.n_unconfirmed;
      continue;
    }
    if (traj.events.empty())
      result.censored_times.push_back(traj.duration);
    else
      result.event_times.push_back(traj.events.front().time);
  }
  return finish_first_jump(std::move(result));
}

FirstJumpResult first_jump_histogram(const std::vector<DecodedTrace>& traces,
                                     const PreparationSpec& prep) {
  const int level = prep.target_level();
  FirstJumpResult result;
  for (const auto& trace : traces) {
    double t0 = -1.0;
    for (const auto& s : trace.samples) {
      if (s.inferred == level) {
        t0 = s.time;
        break;
      }
    }
    if (t0 < 0.0) {
      ++result.n_unconfirmed;
      continue;
    }
    const DecodedJump* first = nullptr;
    for (const auto& j : trace.jumps) {
      if (j.time > t0) {
        first = &j;
        break;
      }
    }
    if (first)
      result.event_times.push_back(first->time - t0);
    else
      result.censored_times.push_back(trace.samples.back().time - t0);
  }
  return finish_first_jump(std::move(result));
}

double occupancy_from_p1(double p1) {
  if (p1 <= 0.0) return 0.0;
  if (!(p1 < 0.25))
    throw NumericalError("occupancy_from_p1: time fraction " + std::to_string(p1) +
                         " outside the invertible range [0, 0.25)");
  double root = std::sqrt(1.0 - 4.0 * p1);
  return (1.0 - 2.0 * p1 - root) / (2.0 * p1);
}

ThermometryEstimate equilibrium_thermometry(const std::vector<DecodedTrace>& traces,
                                            const DetectorParams& det,
                                            const DecoderParams& dec,
                                            double min_total_time) {
  det.validate();
  dec.validate();
  if (traces.empty()) throw ConfigError("equilibrium_thermometry: no traces");

  ThermometryEstimate est;
  double pooled_one_time = 0.0;
  std::vector<double> per_trace_p1;
  for (const auto& trace : traces) {
    if (trace.samples.size() < 2) continue;
    double one_time = 0.0;
    for (std::size_t i = 0; i + 1 < trace.samples.size(); ++i)
      if (trace.samples[i].inferred == 1)
        one_time += trace.samples[i + 1].time - trace.samples[i].time;
    double span = trace.samples.back().time - trace.samples.front().time;
    pooled_one_time += one_time;
    est.total_time += span;
    est.n_jumps += static_cast<long>(trace.jumps.size());
    ++est.n_traces;
    per_trace_p1.push_back(one_time / span);
  }

  if (est.total_time < min_total_time)
    throw NumericalError("equilibrium_thermometry: observed " +
                         std::to_string(est.total_time) + " s, need at least " +
                         std::to_string(min_total_time) + " s for a meaningful estimate");

  est.p1_measured = pooled_one_time / est.total_time;

  double eps1 = vote_error_probability(det.p_g_given_1, dec.window).exact_tail;
  double eps0 = vote_error_probability(det.p_e_given_0, dec.window).exact_tail;
  est.p1_corrected = (est.p1_measured - eps0) / (1.0 - eps0 - eps1);

  est.n_raw = occupancy_from_p1(est.p1_measured);
  est.n_corrected = occupancy_from_p1(est.p1_corrected);

  if (per_trace_p1.size() >= 2) {
    double se_p = std::sqrt(sample_variance(per_trace_p1) /
                            static_cast<double>(per_trace_p1.size()));
    // Propagate through the correction and the inversion numerically.
    double h = std::max(1.0e-6, 0.01 * se_p);
    double up = occupancy_from_p1((est.p1_measured + h - eps0) / (1.0 - eps0 - eps1));
    double down = occupancy_from_p1((est.p1_measured - h - eps0) / (1.0 - eps0 - eps1));
    est.std_error = se_p * std::abs(up - down) / (2.0 * h);
  }
  return est;
}

}  // namespace photonbox

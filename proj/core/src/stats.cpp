#include "photonbox/stats.hpp"

#include <cmath>
#include <string>

#include "photonbox/errors.hpp"

namespace photonbox {

double sample_mean(const std::vector<double>& xs) {
  if (xs.empty()) throw NumericalError("sample_mean: empty sample");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_variance(const std::vector<double>& xs) {
  if (xs.size() < 2) throw NumericalError("sample_variance: need at least two points");
  double m = sample_mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

LifetimeFit fit_exponential_mle(const std::vector<double>& event_times,
                                const std::vector<double>& censored_times) {
  const int n_events = static_cast<int>(event_times.size());
  if (n_events < 10)
    throw NumericalError("fit_exponential_mle: only " + std::to_string(n_events) +
                         " events, need at least 10");
  double total = 0.0;
  for (double t : event_times) {
    if (!(t >= 0.0)) throw NumericalError("fit_exponential_mle: negative event time");
    total += t;
  }
  for (double t : censored_times) {
    if (!(t >= 0.0)) throw NumericalError("fit_exponential_mle: negative censor time");
    total += t;
  }

  LifetimeFit fit;
  fit.method = FitMethod::mle_exponential;
  fit.n_events = n_events;
  fit.tau = total / static_cast<double>(n_events);
  fit.tau_stderr = fit.tau / std::sqrt(static_cast<double>(n_events));
  return fit;
}

LifetimeFit fit_exponential_binned(const std::vector<double>& event_times,
                                   double tau_scale) {
  if (!(tau_scale > 0.0))
    throw NumericalError("fit_exponential_binned: non-positive time scale");
  constexpr int kBins = 20;
  const double t_max = 5.0 * tau_scale;
  const double width = t_max / kBins;

  int counts[kBins] = {};
  int in_range = 0;
  for (double t : event_times) {
    if (t < 0.0 || t >= t_max) continue;
    ++counts[static_cast<int>(t / width)];
    ++in_range;
  }

  // Poisson-weighted straight line through ln(count) at the bin centres.
  double s = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int used = 0;
  for (int i = 0; i < kBins; ++i) {
    if (counts[i] == 0) continue;
    double x = (i + 0.5) * width;
    double y = std::log(static_cast<double>(counts[i]));
    double w = static_cast<double>(counts[i]);
    s += w;
    sx += w * x;
    sy += w * y;
    sxx += w * x * x;
    sxy += w * x * y;
    ++used;
  }
  if (used < 3)
    throw NumericalError("fit_exponential_binned: only " + std::to_string(used) +
                         " occupied bins, need at least 3");

  double delta = s * sxx - sx * sx;
  double slope = (s * sxy - sx * sy) / delta;
  if (!(slope < 0.0))
    throw NumericalError("fit_exponential_binned: histogram is not decaying");
  double slope_var = s / delta;

  LifetimeFit fit;
  fit.method = FitMethod::binned_loglinear;
  fit.n_events = in_range;
  fit.bins_used = used;
  fit.tau = -1.0 / slope;
  fit.tau_stderr = std::sqrt(slope_var) / (slope * slope);
  return fit;
}

}  // namespace photonbox

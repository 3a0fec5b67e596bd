#pragma once

#include <vector>

namespace photonbox {

enum class FitMethod {
  mle_exponential,   ///< censoring-aware maximum likelihood
  binned_loglinear,  ///< weighted straight-line fit to log bin counts
};

struct LifetimeFit {
  double tau = 0.0;
  double tau_stderr = 0.0;
  int n_events = 0;
  int bins_used = 0;  ///< binned method only
  FitMethod method = FitMethod::mle_exponential;
};

/// Exponential lifetime from event times plus right-censored observation
/// spans: tau = (sum of all observed time) / (number of events).
/// Requires at least 10 events.
LifetimeFit fit_exponential_mle(const std::vector<double>& event_times,
                                const std::vector<double>& censored_times);

/// Histogram route: 20 uniform bins on [0, 5 * tau_scale], empty bins
/// excluded, straight line through ln(count) with Poisson count weights.
/// Events beyond the range are ignored. Requires at least 3 occupied bins.
LifetimeFit fit_exponential_binned(const std::vector<double>& event_times,
                                   double tau_scale);

double sample_mean(const std::vector<double>& xs);
double sample_variance(const std::vector<double>& xs);  ///< unbiased, n-1

}  // namespace photonbox

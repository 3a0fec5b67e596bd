#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "photonbox/errors.hpp"

namespace photonbox {

struct OdeOptions {
  double rtol = 1.0e-9;
  double atol = 1.0e-12;
  double initial_step = 0.0;  // 0 picks a heuristic first step
  std::size_t max_steps = 10'000'000;
};

/// Adaptive Dormand-Prince 5(4) integration of y' = f(t, y), reporting the
/// solution exactly at each requested grid point (steps are clipped to the
/// grid, no interpolation). The grid must be strictly increasing; the state
/// at t_grid[0] is the initial condition itself.
///
/// f has signature f(double t, const std::vector<double>& y,
/// std::vector<double>& dydt). Throws NumericalError if step control stalls
/// or the step budget is exhausted.
template <typename Rhs>
std::vector<std::vector<double>> integrate_ode(Rhs&& f, std::vector<double> y,
                                               const std::vector<double>& t_grid,
                                               const OdeOptions& opts = {}) {
  // Dormand-Prince tableau.
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  if (t_grid.size() < 1) throw NumericalError("integrate_ode: empty time grid");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1]))
      throw NumericalError("integrate_ode: time grid must be strictly increasing");
  }

  const std::size_t dim = y.size();
  std::vector<std::vector<double>> out;
  out.reserve(t_grid.size());
  out.push_back(y);

  std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
  std::vector<double> ytmp(dim), ynew(dim);

  double t = t_grid.front();
  const double t_end = t_grid.back();
  double span = t_end - t;
  double h = opts.initial_step > 0 ? opts.initial_step : span * 1.0e-4;
  std::size_t next_grid = 1;
  std::size_t steps = 0;

  f(t, y, k1);  // FSAL: k1 always holds the derivative at (t, y)

  while (next_grid < t_grid.size()) {
    if (++steps > opts.max_steps)
      throw NumericalError("integrate_ode: step budget exhausted at t=" + std::to_string(t));

    bool hit_grid = false;
    double target = t_grid[next_grid];
    const double h_free = h;  // controller's preferred step before grid clipping
    if (t + h >= target) {
      h = target - t;
      hit_grid = true;
    }
    if (!(h > 0) || t + h == t)
      throw NumericalError("integrate_ode: step size underflow at t=" + std::to_string(t));

    for (std::size_t i = 0; i < dim; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    f(t + c2 * h, ytmp, k2);
    for (std::size_t i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    f(t + c3 * h, ytmp, k3);
    for (std::size_t i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(t + c4 * h, ytmp, k4);
    for (std::size_t i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(t + c5 * h, ytmp, k5);
    for (std::size_t i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                            a65 * k5[i]);
    f(t + h, ytmp, k6);
    for (std::size_t i = 0; i < dim; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                            b6 * k6[i]);
    f(t + h, ynew, k7);

    double err = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                      e6 * k6[i] + e7 * k7[i]);
      double scale = opts.atol + opts.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      double r = e / scale;
      err += r * r;
    }
    err = std::sqrt(err / static_cast<double>(dim));

    double factor = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    factor = std::clamp(factor, 0.2, 5.0);

    if (err <= 1.0) {
      t += h;
      y.swap(ynew);
      k1.swap(k7);  // FSAL
      if (hit_grid) {
        t = target;  // avoid accumulated roundoff in grid comparisons
        out.push_back(y);
        ++next_grid;
        // A clipped step says nothing about accuracy headroom; resume from
        // the controller's own step estimate.
        h = std::min(h_free, span);
      } else {
        h = std::min(h * factor, span);
      }
    } else {
      h = h * factor;  // k1 still valid for (t, y)
    }
  }
  return out;
}

}  // namespace photonbox

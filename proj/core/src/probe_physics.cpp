#include "photonbox/probe_physics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <complex>
#include <string>

#include "photonbox/constants.hpp"
#include "photonbox/errors.hpp"

namespace photonbox {

void ProbeGeometry::validate() const {
  if (!(omega0 >= 0.0)) throw ConfigError("omega0_khz: coupling must be non-negative");
  if (!(waist > 0.0)) throw ConfigError("waist_mm: waist must be positive");
  if (!(velocity > 0.0)) throw ConfigError("velocity_mps: velocity must be positive");
  if (detuning == 0.0) throw ConfigError("detuning_khz: resonant probing is not supported");
  if (std::abs(detuning) < omega0)
    throw ConfigError("detuning_khz: dispersive regime requires |detuning| >= omega0");
  if (!(z_span >= 2.0))
    throw ConfigError("z_span: integration range must cover at least 2 waists");
}

double coupling_at(double z, const ProbeGeometry& geom) {
  double u = z / geom.waist;
  return geom.omega0 * std::exp(-u * u);
}

DressedShifts dressed_shifts(int n, double omega_hz, double detuning_hz) {
  if (n < 0) throw NumericalError("dressed_shifts: negative photon number");
  if (detuning_hz == 0.0) throw NumericalError("dressed_shifts: zero detuning");
  double ad = std::abs(detuning_hz);
  double sign = detuning_hz > 0.0 ? 1.0 : -1.0;
  double o2 = omega_hz * omega_hz;
  DressedShifts s;
  s.shift_e = sign * 0.5 * (std::sqrt(ad * ad + (n + 1) * o2) - ad);
  s.shift_g = -sign * 0.5 * (std::sqrt(ad * ad + n * o2) - ad);
  return s;
}

double ramsey_phase(int n, const ProbeGeometry& geom) {
  geom.validate();
  if (n < 0) throw NumericalError("ramsey_phase: negative photon number");

  auto integrand = [&](double z) {
    return dressed_shifts(n, coupling_at(z, geom), geom.detuning).difference();
  };

  const double zmax = geom.z_span * geom.waist;
  double error = 0.0, l1 = 0.0;
  double integral = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      integrand, -zmax, zmax, 15, 1.0e-9, &error, &l1);
  if (l1 > 0.0 && error > 1.0e-7 * l1)
    throw NumericalError("ramsey_phase: quadrature failed to converge, error=" +
                         std::to_string(error));
  return kTwoPi * integral / geom.velocity;
}

PhaseTable build_phase_table(const ProbeGeometry& geom, int n_max) {
  if (n_max < 0) throw ConfigError("build_phase_table: negative n_max");
  PhaseTable table;
  table.phi.reserve(n_max + 1);
  for (int n = 0; n <= n_max; ++n) table.phi.push_back(ramsey_phase(n, geom));
  return table;
}

double ideal_detection_probability(int n, const PhaseTable& table) {
  return 0.5 * (1.0 + std::cos(table.relative(n)));
}

namespace {

/// One exact SU(2) step exp(-i (cx sx + cy sy + cz sz)) applied in place.
inline void apply_su2(double cx, double cy, double cz, std::complex<double>& a,
                      std::complex<double>& b) {
  double r = std::sqrt(cx * cx + cy * cy + cz * cz);
  double cosr = std::cos(r);
  double sinc = r > 1.0e-8 ? std::sin(r) / r : 1.0 - r * r / 6.0;
  std::complex<double> u00(cosr, -sinc * cz);
  std::complex<double> u01(-sinc * cy, -sinc * cx);
  std::complex<double> u10(sinc * cy, -sinc * cx);
  std::complex<double> u11(cosr, sinc * cz);
  std::complex<double> na = u00 * a + u01 * b;
  std::complex<double> nb = u10 * a + u11 * b;
  a = na;
  b = nb;
}

struct TwoLevelPulse {
  double half_detuning_ang;  // delta/2 in rad/s
  double rabi_scale_ang;     // sqrt(n+1) * omega0 * pi in rad/s (coupling/2)
  double inv_tau2;           // 1 / (w/v)^2
  double sigma_x_coeff(double t) const {
    return rabi_scale_ang * std::exp(-t * t * inv_tau2);
  }
};

/// Fourth-order commutator-corrected step over [t, t+h] using the two-point
/// Gauss rule. The generator is c . sigma with
///   cx = h (a1 + a2) / 2,  cy = sqrt(3) h^2 b (a1 - a2) / 6,  cz = h b,
/// where a_i are the sigma_x coefficients at the Gauss nodes and b is the
/// constant sigma_z coefficient.
inline void magnus_step(const TwoLevelPulse& p, double t, double h,
                        std::complex<double>& a, std::complex<double>& b2) {
  static const double node = 0.5 / std::sqrt(3.0);
  double a1 = p.sigma_x_coeff(t + (0.5 - node) * h);
  double a2 = p.sigma_x_coeff(t + (0.5 + node) * h);
  double bcoef = p.half_detuning_ang;
  double cx = 0.5 * h * (a1 + a2);
  double cy = std::sqrt(3.0) / 6.0 * h * h * bcoef * (a1 - a2);
  double cz = h * bcoef;
  apply_su2(cx, cy, cz, a, b2);
}

}  // namespace

double adiabatic_transition_probability(int n, const ProbeGeometry& geom,
                                        double local_tol, double* norm_defect) {
  geom.validate();
  if (n < 0) throw NumericalError("adiabatic_transition_probability: negative n");

  TwoLevelPulse pulse;
  pulse.half_detuning_ang = kPi * geom.detuning;  // 2*pi*delta / 2
  pulse.rabi_scale_ang = kPi * geom.omega0 * std::sqrt(static_cast<double>(n + 1));
  double tau = geom.waist / geom.velocity;
  pulse.inv_tau2 = 1.0 / (tau * tau);

  const double t_end = geom.z_span * tau;
  double t = -t_end;

  std::complex<double> a(1.0, 0.0), b(0.0, 0.0);
  double h = tau / 64.0;
  const double h_min = tau * 1.0e-9;
  long steps = 0;

  while (true) {
    bool final_step = t + h >= t_end;
    if (final_step) h = t_end - t;

    std::complex<double> a1 = a, b1 = b;
    magnus_step(pulse, t, h, a1, b1);

    std::complex<double> a2 = a, b2 = b;
    magnus_step(pulse, t, 0.5 * h, a2, b2);
    magnus_step(pulse, t + 0.5 * h, 0.5 * h, a2, b2);

    double err = std::max(std::abs(a1 - a2), std::abs(b1 - b2));
    bool accept = err <= local_tol;
    if (accept) {
      a = a2;
      b = b2;
      t += h;
      if (final_step) break;
    }
    double factor = err > 0.0 ? 0.9 * std::pow(local_tol / err, 0.2) : 5.0;
    h *= std::clamp(factor, 0.2, 5.0);
    if (!accept && h < h_min)
      throw NumericalError("adiabatic_transition_probability: step underflow");
    if (++steps > 50'000'000)
      throw NumericalError("adiabatic_transition_probability: step budget exhausted");
  }

  double norm2 = std::norm(a) + std::norm(b);
  if (norm_defect) *norm_defect = std::abs(norm2 - 1.0);
  return std::norm(b);
}

}  // namespace photonbox

#pragma once

#include <vector>

namespace photonbox {

/// Geometry and tuning of the dispersive probe crossing the mode.
/// Frequencies are ordinary (not angular) throughout.
struct ProbeGeometry {
  double omega0 = 51.0e3;   ///< vacuum Rabi frequency at the mode centre [Hz]
  double waist = 6.0e-3;    ///< Gaussian mode waist [m]
  double velocity = 250.0;  ///< probe velocity along the mode axis [m/s]
  double detuning = 67.0e3; ///< probe-mode detuning [Hz]
  double z_span = 5.0;      ///< integration half-range in units of the waist

  /// Throws ConfigError unless the geometry is physical and dispersive
  /// (|detuning| >= omega0, detuning nonzero).
  void validate() const;

  /// Time spent between the integration boundaries [s].
  double transit_time() const { return 2.0 * z_span * waist / velocity; }
};

/// Position-dependent coupling omega0 * exp(-z^2/w^2) [Hz].
double coupling_at(double z, const ProbeGeometry& geom);

/// Level shifts of the two probe states inside the mode [Hz].
struct DressedShifts {
  double shift_e = 0.0;
  double shift_g = 0.0;
  double difference() const { return shift_e - shift_g; }
};

/// Dispersive level shifts for photon number n at instantaneous coupling
/// omega_hz. Exact two-level expressions, valid at any ratio omega/detuning;
/// detuning must be nonzero and may be negative (shifts change sign).
DressedShifts dressed_shifts(int n, double omega_hz, double detuning_hz);

/// Phase accumulated between the probe states across one full transit [rad].
double ramsey_phase(int n, const ProbeGeometry& geom);

/// Transit phases for n = 0..n_max with the interferometer referenced to the
/// empty mode, so an ideal readout maps 0 photons to g with certainty.
struct PhaseTable {
  std::vector<double> phi;  ///< absolute transit phase per level [rad]

  int n_max() const { return static_cast<int>(phi.size()) - 1; }
  /// Phase relative to the empty-mode fringe centre.
  double relative(int n) const { return phi.at(n) - phi.at(0); }
};

PhaseTable build_phase_table(const ProbeGeometry& geom, int n_max);

/// Error-free readout: probability of detecting g given n photons,
/// (1 + cos(phi(n) - phi(0))) / 2.
double ideal_detection_probability(int n, const PhaseTable& table);

/// Probability that a probe entering in its upper state exits in the lower
/// bare state after one transit, i.e. the failure rate of adiabatic
/// dressed-state following. Computed by unitary two-level propagation
/// (commutator-corrected midpoint exponentials with step doubling).
/// If norm_defect is non-null it receives | ||psi||^2 - 1 | at the end.
double adiabatic_transition_probability(int n, const ProbeGeometry& geom,
                                        double local_tol = 1.0e-13,
                                        double* norm_defect = nullptr);

}  // namespace photonbox

#pragma once

#include <vector>

#include "photonbox/detection_chain.hpp"
#include "photonbox/field_dynamics.hpp"
#include "photonbox/jump_decoder.hpp"
#include "photonbox/stats.hpp"

namespace photonbox {

enum class PrepTarget {
  vacuum_reset,  ///< field emptied before the run
  fock_one,      ///< single photon injected before the run
  thermal,       ///< field left in equilibrium with the reservoir
};

struct PreparationSpec {
  PrepTarget target = PrepTarget::vacuum_reset;
  double residual_error = 0.003;  ///< weight left on the unwanted level

  void validate() const;
  /// Level the preparation aims for; thermal preparation has none.
  int target_level() const;
};

/// Initial distribution realised by the preparation step.
FockDistribution prepare_initial(const PreparationSpec& prep, const BathParams& bath);

/// Ensemble average of the one-photon indicator on a fixed time grid.
struct EnsembleCurve {
  std::vector<double> t_grid;
  std::vector<double> mean;
  std::vector<double> std_error;
  int n_trajectories = 0;
};

/// Ground-truth mode: the indicator of the actual level being one.
/// All trajectories must share one duration covering the grid.
EnsembleCurve ensemble_p1(const std::vector<FieldTrajectory>& trajectories,
                          const std::vector<double>& t_grid);

/// Measured mode: the decoded level, held constant between probe atoms and
/// zero before the first one. The grid must not out-run any trace.
EnsembleCurve ensemble_p1(const std::vector<DecodedTrace>& traces,
                          const std::vector<double>& t_grid);

/// First passage out of the prepared level.
struct FirstJumpResult {
  std::vector<double> event_times;     ///< relative to the confirmation time
  std::vector<double> censored_times;  ///< spans that ended without a jump
  int n_unconfirmed = 0;               ///< inputs that never showed the level
  LifetimeFit mle;
  LifetimeFit binned;
};

/// Ground-truth mode: trajectories not starting on the prepared level are
/// dropped (counted in n_unconfirmed); the first jump ends the dwell.
FirstJumpResult first_jump_histogram(const std::vector<FieldTrajectory>& trajectories,
                                     const PreparationSpec& prep);

/// Measured mode: the dwell starts at the first probe atom whose decoded
/// value equals the prepared level and ends at the next decoded jump.
FirstJumpResult first_jump_histogram(const std::vector<DecodedTrace>& traces,
                                     const PreparationSpec& prep);

/// Mean occupancy estimate from equilibrium telegraph records.
struct ThermometryEstimate {
  double p1_measured = 0.0;   ///< pooled time fraction spent decoded at one
  double p1_corrected = 0.0;  ///< after removing wrong-majority weight
  double n_raw = 0.0;         ///< inversion of p1_measured
  double n_corrected = 0.0;   ///< inversion of p1_corrected
  double std_error = 0.0;     ///< on n_corrected, from trace-to-trace scatter
  double total_time = 0.0;    ///< pooled observation span [s]
  long n_jumps = 0;           ///< decoded transitions across the pool
  int n_traces = 0;
};

/// Mean photon number of the reservoir from the time fraction spent at one
/// photon, p1 = n/(1+n)^2, with the decoder's wrong-majority tails removed:
/// p1_corrected = (p1_measured - eps0) / (1 - eps0 - eps1). Observation
/// shorter than min_total_time is refused as statistically meaningless.
ThermometryEstimate equilibrium_thermometry(const std::vector<DecodedTrace>& traces,
                                            const DetectorParams& det,
                                            const DecoderParams& dec,
                                            double min_total_time = 100.0);

/// Inverse of p1 = n/(1+n)^2 on the physical branch 0 <= n < 1.
/// Defined for p1 in [0, 1/4); non-positive p1 maps to 0.
double occupancy_from_p1(double p1);

}  // namespace photonbox

#pragma once

#include <string>
#include <vector>

#include "photonbox/analysis.hpp"
#include "photonbox/detection_chain.hpp"
#include "photonbox/jump_decoder.hpp"

namespace photonbox {

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double x);

/// Writes through a temporary file in the same directory followed by a
/// rename, so an interrupted write never leaves a truncated file behind.
/// Throws ConfigError on any filesystem failure.
void write_text_file(const std::string& path, const std::string& content);

/// Probe stream, columns time_s,true_n,detected with detected in {E,G}.
std::string atoms_to_csv(const std::vector<AtomRecord>& atoms);

/// Inverse of atoms_to_csv. Accepts any stream with the same header;
/// throws ConfigError with the line number on malformed input.
std::vector<AtomRecord> atoms_from_csv(const std::string& text);
std::vector<AtomRecord> read_atoms_csv(const std::string& path);

/// Decoded telegraph record, columns time_s,inferred.
std::string decoded_to_csv(const DecodedTrace& trace);

/// Jump list as a JSON array of {time_s, from, to} objects.
std::string jumps_to_json(const DecodedTrace& trace);

/// Field trajectory as a step record, columns time_s,n: the initial level
/// at t = 0 followed by one row per jump.
std::string trajectory_to_csv(const FieldTrajectory& traj);

/// Ensemble curve, columns time_s,p1,std_error.
std::string curve_to_csv(const EnsembleCurve& curve);

/// Deterministic overlay, columns time_s,p1_ode.
std::string overlay_to_csv(const std::vector<double>& t_grid,
                           const std::vector<double>& p1);

/// Dwell-time histogram, columns bin_left_s,bin_right_s,count. Bins span
/// [0, n_bins * bin_width); times beyond the range are dropped.
std::string histogram_to_csv(const std::vector<double>& times, double bin_width,
                             int n_bins);

/// One column dwell_s, one row per event.
std::string dwells_to_csv(const std::vector<double>& times);

}  // namespace photonbox

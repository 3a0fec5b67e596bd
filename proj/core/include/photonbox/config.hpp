#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "photonbox/analysis.hpp"
#include "photonbox/detection_chain.hpp"
#include "photonbox/field_dynamics.hpp"
#include "photonbox/jump_decoder.hpp"
#include "photonbox/probe_physics.hpp"

namespace photonbox {

enum class Scenario {
  telegraph,            ///< one long monitored record, atoms + decoded telegraph
  fock_decay,           ///< ensemble P1(t) after one-photon preparation + ODE overlay
  lifetime_histograms,  ///< first-jump dwell times of the one- and zero-photon states
  thermometry,          ///< reservoir occupancy from equilibrium telegraph records
  phase_check,          ///< per-level transit phases, no sampling
  adiabaticity_check,   ///< probe state-following failure probability, no sampling
};

const char* scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);

/// Full resolved description of one run. Defaults depend on the scenario;
/// see default_config.
struct ScenarioConfig {
  Scenario scenario = Scenario::telegraph;
  BathParams bath;
  ProbeGeometry geom;
  ArrivalParams arrivals;
  DetectorParams detector;
  DecoderParams decoder;
  PreparationSpec prep;
  int n_trajectories = 1;
  double duration = 2.5;  ///< [s]
  /// Companion zero-photon ensemble, used by lifetime_histograms only.
  int n_trajectories_zero = 400;
  double duration_zero = 8.0;  ///< [s]
  int threads = 0;  ///< worker threads; 0 picks the hardware count
  std::uint64_t base_seed = 0;
  std::string output_dir = "out";

  /// Component invariants plus run-level ones (n_trajectories >= 1,
  /// positive durations, non-empty output_dir). Throws ConfigError.
  void validate() const;
};

/// Scenario defaults: physics parameters are shared, ensemble sizes and the
/// preparation differ per scenario.
ScenarioConfig default_config(Scenario s);

/// One key = value assignment with the line it came from (0 for overrides).
struct ConfigEntry {
  std::string key;
  std::string value;
  long line = 0;
};

/// Line-oriented parse: '#' starts a comment, blank lines are skipped,
/// everything else must read key = value. Syntax errors name the line.
std::vector<ConfigEntry> parse_config_text(const std::string& text);

/// Applies one assignment. Unknown keys, malformed values and unit-suffixed
/// duplicates all throw ConfigError naming the key.
void apply_entry(ScenarioConfig& cfg, const std::string& key, const std::string& value);

/// Resolution order: scenario defaults, then file assignments, then --set
/// overrides. The scenario itself comes from `scenario_override` when
/// non-empty (the CLI positional), else from a scenario key in the file,
/// else telegraph. The result is validated before it is returned.
ScenarioConfig resolve_config(const std::string& file_text, bool has_file,
                              const std::vector<std::string>& set_overrides,
                              const std::string& scenario_override);

/// Canonical key = value rendering; parsing it back reproduces cfg exactly.
std::string config_to_text(const ScenarioConfig& cfg);

/// The same canonical form as a JSON object (strings for enums and paths,
/// numbers elsewhere), as embedded in run manifests.
std::string config_to_json(const ScenarioConfig& cfg);

/// Rebuilds the configuration recorded in a manifest written by run_scenario.
ScenarioConfig config_from_manifest(const std::string& manifest_json);

}  // namespace photonbox

#pragma once

#include <string>
#include <vector>

#include "photonbox/config.hpp"

namespace photonbox {

/// Runs one scenario end-to-end and writes every artifact plus a
/// manifest.json recording the resolved configuration, the code version and
/// the per-trajectory seeds into cfg.output_dir (created if needed).
/// Returns the artifact file names, manifest.json last. Identical
/// configuration and base_seed give byte-identical files, independent of
/// the worker thread count.
std::vector<std::string> run_scenario(const ScenarioConfig& cfg);

}  // namespace photonbox

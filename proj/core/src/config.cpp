#include "photonbox/config.hpp"

#include <charconv>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "photonbox/errors.hpp"
#include "photonbox/io.hpp"

namespace photonbox {

const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::telegraph: return "telegraph";
    case Scenario::fock_decay: return "fock_decay";
    case Scenario::lifetime_histograms: return "lifetime_histograms";
    case Scenario::thermometry: return "thermometry";
    case Scenario::phase_check: return "phase_check";
    case Scenario::adiabaticity_check: return "adiabaticity_check";
  }
  throw ConfigError("unreachable scenario value");
}

Scenario scenario_from_name(const std::string& name) {
  for (Scenario s :
       {Scenario::telegraph, Scenario::fock_decay, Scenario::lifetime_histograms,
        Scenario::thermometry, Scenario::phase_check, Scenario::adiabaticity_check})
    if (name == scenario_name(s)) return s;
  throw ConfigError("unknown scenario '" + name + "'");
}

namespace {

const char* prep_name(PrepTarget t) {
  switch (t) {
    case PrepTarget::vacuum_reset: return "vacuum_reset";
    case PrepTarget::fock_one: return "fock_one";
    case PrepTarget::thermal: return "thermal";
  }
  throw ConfigError("unreachable preparation value");
}

PrepTarget prep_from_name(const std::string& name) {
  if (name == "vacuum_reset") return PrepTarget::vacuum_reset;
  if (name == "fock_one") return PrepTarget::fock_one;
  if (name == "thermal") return PrepTarget::thermal;
  throw ConfigError("unknown preparation '" + name + "'");
}

double parse_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size())
    throw ConfigError("key '" + key + "': bad number '" + value + "'");
  return v;
}

int parse_int(const std::string& key, const std::string& value) {
  int v = 0;
  auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size())
    throw ConfigError("key '" + key + "': bad integer '" + value + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size())
    throw ConfigError("key '" + key + "': bad seed '" + value + "'");
  return v;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return std::string();
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

void ScenarioConfig::validate() const {
  bath.validate();
  geom.validate();
  arrivals.validate();
  detector.validate();
  decoder.validate();
  prep.validate();
  if (n_trajectories < 1) throw ConfigError("n_trajectories must be at least 1");
  if (!(duration > 0.0)) throw ConfigError("duration_s must be positive");
  if (n_trajectories_zero < 1)
    throw ConfigError("n_trajectories_zero must be at least 1");
  if (!(duration_zero > 0.0)) throw ConfigError("duration_zero_s must be positive");
  if (threads < 0) throw ConfigError("threads must be non-negative");
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

ScenarioConfig default_config(Scenario s) {
  ScenarioConfig cfg;
  cfg.scenario = s;
  switch (s) {
    case Scenario::telegraph:
      cfg.prep.target = PrepTarget::thermal;
      cfg.n_trajectories = 1;
      cfg.duration = 2.5;
      break;
    case Scenario::fock_decay:
      cfg.prep.target = PrepTarget::fock_one;
      cfg.n_trajectories = 904;
      cfg.duration = 0.8;
      break;
    case Scenario::lifetime_histograms:
      cfg.prep.target = PrepTarget::fock_one;
      cfg.n_trajectories = 950;
      cfg.duration = 1.2;
      break;
    case Scenario::thermometry:
      cfg.prep.target = PrepTarget::thermal;
      cfg.n_trajectories = 560;
      cfg.duration = 2.5;
      break;
    case Scenario::phase_check:
    case Scenario::adiabaticity_check:
      cfg.prep.target = PrepTarget::vacuum_reset;
      cfg.n_trajectories = 1;
      cfg.duration = 1.0;
      break;
  }
  return cfg;
}

std::vector<ConfigEntry> parse_config_text(const std::string& text) {
  std::vector<ConfigEntry> entries;
  std::istringstream in(text);
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (size_t hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::string stripped = trim(line);
    if (stripped.empty()) continue;
    size_t eq = stripped.find('=');
    std::string key = eq == std::string::npos ? std::string() : trim(stripped.substr(0, eq));
    std::string value = eq == std::string::npos ? std::string() : trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    entries.push_back({key, value, lineno});
  }
  return entries;
}

void apply_entry(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "scenario") {
    cfg.scenario = scenario_from_name(value);
  } else if (key == "t_cavity_s") {
    cfg.bath.t_cavity = parse_double(key, value);
  } else if (key == "n_therm") {
    cfg.bath.n_therm = parse_double(key, value);
  } else if (key == "n_max") {
    cfg.bath.n_max = parse_int(key, value);
  } else if (key == "omega0_khz") {
    cfg.geom.omega0 = parse_double(key, value) * 1.0e3;
  } else if (key == "omega0_hz") {
    cfg.geom.omega0 = parse_double(key, value);
  } else if (key == "waist_mm") {
    cfg.geom.waist = parse_double(key, value) * 1.0e-3;
  } else if (key == "waist_m") {
    cfg.geom.waist = parse_double(key, value);
  } else if (key == "velocity_mps") {
    cfg.geom.velocity = parse_double(key, value);
  } else if (key == "detuning_khz") {
    cfg.geom.detuning = parse_double(key, value) * 1.0e3;
  } else if (key == "detuning_hz") {
    cfg.geom.detuning = parse_double(key, value);
  } else if (key == "z_span") {
    cfg.geom.z_span = parse_double(key, value);
  } else if (key == "slot_period_us") {
    cfg.arrivals.slot_period = parse_double(key, value) * 1.0e-6;
  } else if (key == "slot_period_s") {
    cfg.arrivals.slot_period = parse_double(key, value);
  } else if (key == "occupancy") {
    cfg.arrivals.occupancy = parse_double(key, value);
  } else if (key == "p_g_given_1") {
    cfg.detector.p_g_given_1 = parse_double(key, value);
  } else if (key == "p_e_given_0") {
    cfg.detector.p_e_given_0 = parse_double(key, value);
  } else if (key == "emission_prob") {
    cfg.detector.emission_prob = parse_double(key, value);
  } else if (key == "window") {
    cfg.decoder.window = parse_int(key, value);
  } else if (key == "prep") {
    cfg.prep.target = prep_from_name(value);
  } else if (key == "residual_error") {
    cfg.prep.residual_error = parse_double(key, value);
  } else if (key == "n_trajectories") {
    cfg.n_trajectories = parse_int(key, value);
  } else if (key == "duration_s") {
    cfg.duration = parse_double(key, value);
  } else if (key == "n_trajectories_zero") {
    cfg.n_trajectories_zero = parse_int(key, value);
  } else if (key == "duration_zero_s") {
    cfg.duration_zero = parse_double(key, value);
  } else if (key == "threads") {
    cfg.threads = parse_int(key, value);
  } else if (key == "base_seed") {
    cfg.base_seed = parse_u64(key, value);
  } else if (key == "output_dir") {
    cfg.output_dir = value;
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

ScenarioConfig resolve_config(const std::string& file_text, bool has_file,
                              const std::vector<std::string>& set_overrides,
                              const std::string& scenario_override) {
  std::vector<ConfigEntry> file_entries;
  if (has_file) file_entries = parse_config_text(file_text);

  std::string scen_name = scenario_override;
  if (scen_name.empty())
    for (const ConfigEntry& e : file_entries)
      if (e.key == "scenario") scen_name = e.value;
  Scenario scen =
      scen_name.empty() ? Scenario::telegraph : scenario_from_name(scen_name);

  ScenarioConfig cfg = default_config(scen);
  for (const ConfigEntry& e : file_entries) {
    if (e.key == "scenario") continue;
    try {
      apply_entry(cfg, e.key, e.value);
    } catch (const ConfigError& err) {
      throw ConfigError("config line " + std::to_string(e.line) + ": " + err.what());
    }
  }
  for (const std::string& ov : set_overrides) {
    size_t eq = ov.find('=');
    std::string key = eq == std::string::npos ? std::string() : trim(ov.substr(0, eq));
    std::string value = eq == std::string::npos ? std::string() : trim(ov.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("--set expects key=value, got '" + ov + "'");
    if (key == "scenario")
      throw ConfigError("--set scenario is not allowed; pass the scenario to run");
    try {
      apply_entry(cfg, key, value);
    } catch (const ConfigError& err) {
      throw ConfigError("--set " + ov + ": " + err.what());
    }
  }
  cfg.validate();
  return cfg;
}

std::string config_to_text(const ScenarioConfig& cfg) {
  std::string out;
  auto put = [&out](const char* key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };
  put("scenario", scenario_name(cfg.scenario));
  put("t_cavity_s", format_double(cfg.bath.t_cavity));
  put("n_therm", format_double(cfg.bath.n_therm));
  put("n_max", std::to_string(cfg.bath.n_max));
  put("omega0_hz", format_double(cfg.geom.omega0));
  put("waist_m", format_double(cfg.geom.waist));
  put("velocity_mps", format_double(cfg.geom.velocity));
  put("detuning_hz", format_double(cfg.geom.detuning));
  put("z_span", format_double(cfg.geom.z_span));
  put("slot_period_s", format_double(cfg.arrivals.slot_period));
  put("occupancy", format_double(cfg.arrivals.occupancy));
  put("p_g_given_1", format_double(cfg.detector.p_g_given_1));
  put("p_e_given_0", format_double(cfg.detector.p_e_given_0));
  put("emission_prob", format_double(cfg.detector.emission_prob));
  put("window", std::to_string(cfg.decoder.window));
  put("prep", prep_name(cfg.prep.target));
  put("residual_error", format_double(cfg.prep.residual_error));
  put("n_trajectories", std::to_string(cfg.n_trajectories));
  put("duration_s", format_double(cfg.duration));
  put("n_trajectories_zero", std::to_string(cfg.n_trajectories_zero));
  put("duration_zero_s", format_double(cfg.duration_zero));
  put("threads", std::to_string(cfg.threads));
  put("base_seed", std::to_string(cfg.base_seed));
  put("output_dir", cfg.output_dir);
  return out;
}

std::string config_to_json(const ScenarioConfig& cfg) {
  nlohmann::ordered_json j;
  j["scenario"] = scenario_name(cfg.scenario);
  j["t_cavity_s"] = cfg.bath.t_cavity;
  j["n_therm"] = cfg.bath.n_therm;
  j["n_max"] = cfg.bath.n_max;
  j["omega0_hz"] = cfg.geom.omega0;
  j["waist_m"] = cfg.geom.waist;
  j["velocity_mps"] = cfg.geom.velocity;
  j["detuning_hz"] = cfg.geom.detuning;
  j["z_span"] = cfg.geom.z_span;
  j["slot_period_s"] = cfg.arrivals.slot_period;
  j["occupancy"] = cfg.arrivals.occupancy;
  j["p_g_given_1"] = cfg.detector.p_g_given_1;
  j["p_e_given_0"] = cfg.detector.p_e_given_0;
  j["emission_prob"] = cfg.detector.emission_prob;
  j["window"] = cfg.decoder.window;
  j["prep"] = prep_name(cfg.prep.target);
  j["residual_error"] = cfg.prep.residual_error;
  j["n_trajectories"] = cfg.n_trajectories;
  j["duration_s"] = cfg.duration;
  j["n_trajectories_zero"] = cfg.n_trajectories_zero;
  j["duration_zero_s"] = cfg.duration_zero;
  j["threads"] = cfg.threads;
  j["base_seed"] = cfg.base_seed;
  j["output_dir"] = cfg.output_dir;
  return j.dump(2);
}

ScenarioConfig config_from_manifest(const std::string& manifest_json) {
  nlohmann::json m;
  try {
    m = nlohmann::json::parse(manifest_json);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("manifest: ") + e.what());
  }
  if (!m.contains("config") || !m["config"].is_object())
    throw ConfigError("manifest: missing config object");
  const nlohmann::json& c = m["config"];
  if (!c.contains("scenario") || !c["scenario"].is_string())
    throw ConfigError("manifest: config.scenario missing");
  ScenarioConfig cfg = default_config(scenario_from_name(c["scenario"].get<std::string>()));
  for (auto it = c.begin(); it != c.end(); ++it) {
    if (it.key() == "scenario") continue;
    std::string value =
        it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
    apply_entry(cfg, it.key(), value);
  }
  cfg.validate();
  return cfg;
}

}  // namespace photonbox

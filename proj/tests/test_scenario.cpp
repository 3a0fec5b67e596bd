#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "photonbox/config.hpp"
#include "photonbox/errors.hpp"
#include "photonbox/io.hpp"
#include "photonbox/rng.hpp"
#include "photonbox/scenario.hpp"

using namespace photonbox;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& leaf) {
  fs::path dir = fs::temp_directory_path() / "photonbox_scenario_test" / leaf;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

long line_count(const std::string& text) {
  return std::count(text.begin(), text.end(), '\n');
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::directory_iterator(dir))
    files[entry.path().filename().string()] = slurp(entry.path());
  return files;
}

}  // namespace

TEST_CASE("telegraph writes the declared artifacts and an honest manifest") {
  fs::path dir = scratch_dir("telegraph");
  ScenarioConfig cfg = default_config(Scenario::telegraph);
  cfg.duration = 0.25;
  cfg.base_seed = 11;
  cfg.output_dir = dir.string();

  std::vector<std::string> names = run_scenario(cfg);
  std::vector<std::string> expected = {"atoms.csv",    "truth.csv",   "decoded.csv",
                                       "jumps.json",   "summary.json", "manifest.json"};
  CHECK(names == expected);
  for (const std::string& name : names) CHECK(fs::exists(dir / name));

  std::vector<AtomRecord> atoms = read_atoms_csv((dir / "atoms.csv").string());
  CHECK(atoms.size() > 2000 * 0.25 * 0.25);
  for (const AtomRecord& a : atoms) {
    CHECK(a.time >= 0.0);
    CHECK(a.time < cfg.duration);
  }
  CHECK(line_count(slurp(dir / "decoded.csv")) ==
        static_cast<long>(atoms.size()) + 1);

  nlohmann::json manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["tool"] == "photonbox");
  CHECK(manifest["scenario"] == "telegraph");
  CHECK(manifest["artifacts"].get<std::vector<std::string>>() == expected);
  REQUIRE(manifest["trajectory_seeds"].size() == 1);
  CHECK(manifest["trajectory_seeds"][0].get<std::uint64_t>() == derive_seed(11, 0));

  ScenarioConfig back = config_from_manifest(slurp(dir / "manifest.json"));
  CHECK(back.scenario == cfg.scenario);
  CHECK(back.duration == cfg.duration);
  CHECK(back.base_seed == cfg.base_seed);
  CHECK(back.output_dir == cfg.output_dir);
  fs::remove_all(dir.parent_path());
}

TEST_CASE("reruns with the same config are byte-identical") {
  fs::path dir = scratch_dir("rerun");
  ScenarioConfig cfg = default_config(Scenario::telegraph);
  cfg.duration = 0.3;
  cfg.base_seed = 21;
  cfg.output_dir = dir.string();

  run_scenario(cfg);
  std::map<std::string, std::string> first = snapshot(dir);
  run_scenario(cfg);
  std::map<std::string, std::string> second = snapshot(dir);
  CHECK(first == second);
  CHECK(first.count("manifest.json") == 1);
  fs::remove_all(dir.parent_path());
}

TEST_CASE("worker count changes scheduling but not one byte of output") {
  ScenarioConfig cfg = default_config(Scenario::fock_decay);
  cfg.n_trajectories = 40;
  cfg.duration = 0.3;
  cfg.base_seed = 5;

  fs::path serial = scratch_dir("serial");
  cfg.threads = 1;
  cfg.output_dir = serial.string();
  run_scenario(cfg);

  fs::path parallel = scratch_dir("parallel");
  cfg.threads = 4;
  cfg.output_dir = parallel.string();
  run_scenario(cfg);

  for (const char* name : {"curve.csv", "ode_overlay.csv", "summary.json"})
    CHECK(slurp(serial / name) == slurp(parallel / name));
  fs::remove_all(serial.parent_path());
}

TEST_CASE("fock_decay emits the curve, the overlay and the fit summary") {
  fs::path dir = scratch_dir("fock_decay");
  ScenarioConfig cfg = default_config(Scenario::fock_decay);
  cfg.n_trajectories = 60;
  cfg.duration = 0.4;
  cfg.base_seed = 2;
  cfg.output_dir = dir.string();

  std::vector<std::string> names = run_scenario(cfg);
  CHECK(names == std::vector<std::string>{"curve.csv", "ode_overlay.csv",
                                          "summary.json", "manifest.json"});

  std::string curve = slurp(dir / "curve.csv");
  CHECK(line_count(curve) == 21);
  CHECK(curve.rfind("time_s,p1,std_error\n", 0) == 0);
  std::string overlay = slurp(dir / "ode_overlay.csv");
  CHECK(line_count(overlay) == 22);
  CHECK(overlay.rfind("time_s,p1_ode\n", 0) == 0);

  nlohmann::json summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(summary["grid_points"] == 20);
  CHECK(summary["grid_stop_s"].get<double>() == doctest::Approx(0.35).epsilon(1e-12));
  CHECK(summary["ode_initial_decay_s"].get<double>() ==
        doctest::Approx(0.1085).epsilon(2e-3));
  CHECK(summary["max_abs_deviation"].get<double>() >= 0.0);

  nlohmann::json manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  REQUIRE(manifest["trajectory_seeds"].size() == 60);
  CHECK(manifest["trajectory_seeds"][59].get<std::uint64_t>() == derive_seed(2, 59));
  fs::remove_all(dir.parent_path());
}

TEST_CASE("fock_decay refuses a duration too short for its grid") {
  ScenarioConfig cfg = default_config(Scenario::fock_decay);
  cfg.duration = 0.12;
  cfg.output_dir = scratch_dir("fock_short").string();
  CHECK_THROWS_AS(run_scenario(cfg), ConfigError);
  fs::remove_all(fs::path(cfg.output_dir).parent_path());
}

TEST_CASE("lifetime_histograms fits both levels and keeps the ensembles apart") {
  fs::path dir = scratch_dir("lifetimes");
  ScenarioConfig cfg = default_config(Scenario::lifetime_histograms);
  cfg.n_trajectories = 60;
  cfg.duration = 1.2;
  cfg.n_trajectories_zero = 60;
  cfg.duration_zero = 8.0;
  cfg.base_seed = 3;
  cfg.output_dir = dir.string();

  std::vector<std::string> names = run_scenario(cfg);
  CHECK(names == std::vector<std::string>{"dwells_one.csv", "dwells_zero.csv",
                                          "histogram_one.csv", "histogram_zero.csv",
                                          "summary.json", "manifest.json"});

  nlohmann::json summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  double tau_one = summary["one"]["mle"]["tau_s"].get<double>();
  double tau_zero = summary["zero"]["mle"]["tau_s"].get<double>();
  CHECK(tau_one > 0.05);
  CHECK(tau_one < 0.2);
  CHECK(tau_zero > 0.8);
  CHECK(tau_zero < 3.0);
  CHECK(summary["one"]["n_events"].get<int>() ==
        line_count(slurp(dir / "dwells_one.csv")) - 1);
  CHECK(summary["zero"]["n_events"].get<int>() ==
        line_count(slurp(dir / "dwells_zero.csv")) - 1);

  nlohmann::json manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  REQUIRE(manifest["trajectory_seeds"].size() == 60);
  REQUIRE(manifest["trajectory_seeds_zero"].size() == 60);
  CHECK(manifest["trajectory_seeds"][0].get<std::uint64_t>() !=
        manifest["trajectory_seeds_zero"][0].get<std::uint64_t>());
  fs::remove_all(dir.parent_path());
}

TEST_CASE("thermometry summarises the pooled estimate") {
  fs::path dir = scratch_dir("thermometry");
  ScenarioConfig cfg = default_config(Scenario::thermometry);
  cfg.n_trajectories = 50;
  cfg.duration = 2.5;
  cfg.base_seed = 4;
  cfg.output_dir = dir.string();

  run_scenario(cfg);
  nlohmann::json summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(summary["n_traces"] == 50);
  CHECK(summary["total_time_s"].get<double>() > 100.0);
  CHECK(summary["n_corrected"].get<double>() > 0.0);
  CHECK(summary["n_corrected"].get<double>() < 0.3);
  CHECK(summary["std_error"].get<double>() > 0.0);
  fs::remove_all(dir.parent_path());
}

TEST_CASE("thermometry refuses statistically meaningless observation spans") {
  ScenarioConfig cfg = default_config(Scenario::thermometry);
  cfg.n_trajectories = 2;
  cfg.duration = 1.0;
  cfg.output_dir = scratch_dir("thermo_short").string();
  CHECK_THROWS_AS(run_scenario(cfg), NumericalError);
  fs::remove_all(fs::path(cfg.output_dir).parent_path());
}

TEST_CASE("the check scenarios write their scalar reports") {
  fs::path dir = scratch_dir("checks");
  ScenarioConfig cfg = default_config(Scenario::phase_check);
  cfg.output_dir = (dir / "phase").string();
  run_scenario(cfg);
  nlohmann::json phases =
      nlohmann::json::parse(slurp(dir / "phase" / "phases.json"));
  CHECK(phases["diff_10_over_pi"].get<double>() ==
        doctest::Approx(0.9997909382650332).epsilon(1e-12));
  CHECK(phases["diff_21_over_pi"].get<double>() ==
        doctest::Approx(0.8833250994738869).epsilon(1e-12));
  CHECK(phases["p_ideal_g"][0].get<double>() == 1.0);

  ScenarioConfig acfg = default_config(Scenario::adiabaticity_check);
  acfg.output_dir = (dir / "adiab").string();
  run_scenario(acfg);
  nlohmann::json adiab =
      nlohmann::json::parse(slurp(dir / "adiab" / "adiabaticity.json"));
  CHECK(adiab["transition_probability"].get<double>() < 1.0e-5);
  CHECK(adiab["norm_defect"].get<double>() < 1.0e-10);
  fs::remove_all(dir);
}

TEST_CASE("run_scenario validates before writing anything") {
  ScenarioConfig cfg = default_config(Scenario::telegraph);
  cfg.decoder.window = 0;
  cfg.output_dir = (fs::temp_directory_path() / "photonbox_never_created").string();
  CHECK_THROWS_AS(run_scenario(cfg), ConfigError);
  CHECK_FALSE(fs::exists(cfg.output_dir));
}

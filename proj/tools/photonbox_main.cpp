#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "photonbox/config.hpp"
#include "photonbox/errors.hpp"
#include "photonbox/io.hpp"
#include "photonbox/scenario.hpp"
#include "photonbox/version.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw photonbox::ConfigError("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_command(const std::string& scenario, const std::string& config_path,
                const std::vector<std::string>& sets, const std::string& out_dir,
                bool has_seed, std::uint64_t seed) {
  std::string file_text;
  bool has_file = !config_path.empty();
  if (has_file) file_text = read_file(config_path);
  photonbox::ScenarioConfig cfg =
      photonbox::resolve_config(file_text, has_file, sets, scenario);
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  if (has_seed) cfg.base_seed = seed;
  cfg.validate();
  std::vector<std::string> files = photonbox::run_scenario(cfg);
  std::printf("%s: wrote %zu files to %s\n", scenario_name(cfg.scenario), files.size(),
              cfg.output_dir.c_str());
  for (const std::string& name : files) std::printf("  %s\n", name.c_str());
  return 0;
}

int decode_command(const std::string& input_path, const std::string& config_path,
                   const std::vector<std::string>& sets, const std::string& out_dir) {
  std::string file_text;
  bool has_file = !config_path.empty();
  if (has_file) file_text = read_file(config_path);
  photonbox::ScenarioConfig cfg =
      photonbox::resolve_config(file_text, has_file, sets, "");

  std::vector<photonbox::AtomRecord> atoms = photonbox::read_atoms_csv(input_path);
  photonbox::DecodedTrace trace = photonbox::decode(atoms, cfg.decoder);

  std::filesystem::path dir =
      out_dir.empty() ? std::filesystem::path(input_path).parent_path()
                      : std::filesystem::path(out_dir);
  if (dir.empty()) dir = ".";
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw photonbox::ConfigError("cannot create output directory " + dir.string() +
                                 ": " + ec.message());
  photonbox::write_text_file((dir / "decoded.csv").string(),
                             photonbox::decoded_to_csv(trace));
  photonbox::write_text_file((dir / "jumps.json").string(),
                             photonbox::jumps_to_json(trace));
  std::printf("decoded %zu atoms, %zu jumps; wrote decoded.csv and jumps.json to %s\n",
              atoms.size(), trace.jumps.size(), dir.string().c_str());
  return 0;
}

int validate_command(const std::string& config_path, const std::vector<std::string>& sets) {
  photonbox::ScenarioConfig cfg =
      photonbox::resolve_config(read_file(config_path), true, sets, "");
  std::fputs(photonbox::config_to_text(cfg).c_str(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"photonbox: monitored-cavity photon counting simulator"};
  app.set_version_flag("--version", photonbox::kVersion);
  app.require_subcommand(1);

  std::string scenario;
  std::string config_path;
  std::string out_dir;
  std::string input_path;
  std::vector<std::string> sets;
  std::uint64_t seed = 0;

  CLI::App* run = app.add_subcommand("run", "Run a scenario end-to-end");
  run->add_option("scenario", scenario,
                  "telegraph | fock_decay | lifetime_histograms | thermometry | "
                  "phase_check | adiabaticity_check")
      ->required();
  run->add_option("--config", config_path, "key = value configuration file");
  run->add_option("--set", sets, "single key=value override, repeatable");
  run->add_option("--out", out_dir, "output directory (overrides output_dir)");
  CLI::Option* seed_opt = run->add_option("--seed", seed, "base seed (overrides base_seed)");

  CLI::App* dec = app.add_subcommand("decode", "Decode a recorded atom stream offline");
  dec->add_option("--input", input_path, "atom stream CSV (time_s,true_n,detected)")
      ->required();
  dec->add_option("--config", config_path, "key = value configuration file");
  dec->add_option("--set", sets, "single key=value override, repeatable");
  dec->add_option("--out", out_dir, "output directory (defaults next to the input)");

  CLI::App* val = app.add_subcommand("validate", "Parse a configuration and echo it resolved");
  val->add_option("--config", config_path, "key = value configuration file")->required();
  val->add_option("--set", sets, "single key=value override, repeatable");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed())
      return run_command(scenario, config_path, sets, out_dir, seed_opt->count() > 0, seed);
    if (dec->parsed()) return decode_command(input_path, config_path, sets, out_dir);
    return validate_command(config_path, sets);
  } catch (const photonbox::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const photonbox::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

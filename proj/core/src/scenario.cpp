#include "photonbox/scenario.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "photonbox/analysis.hpp"
#include "photonbox/constants.hpp"
#include "photonbox/errors.hpp"
#include "photonbox/io.hpp"
#include "photonbox/version.hpp"

namespace photonbox {
namespace {

using nlohmann::ordered_json;

/// Index-addressed work distribution: results land in preallocated slots,
/// so the output is independent of scheduling.
template <typename Body>
void parallel_for(int n, int threads, const Body& body) {
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  if (workers > n) workers = n;
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex mu;
  std::exception_ptr first_error;
  auto drain = [&] {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first_error) first_error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(drain);
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

/// Same substream convention as the distribution-seeded field sampler.
FockLevel draw_initial(const FockDistribution& dist, std::uint64_t traj_seed) {
  Rng pick(derive_seed(traj_seed, 0x10ADull));
  double u = pick.uniform();
  FockLevel n0 = 0;
  double acc = 0.0;
  for (std::size_t n = 0; n < dist.p.size(); ++n) {
    acc += dist.p[n];
    n0 = static_cast<FockLevel>(n);
    if (u < acc) break;
  }
  return n0;
}

struct Ensemble {
  std::vector<MonitoredRun> runs;
  std::vector<DecodedTrace> traces;
  std::vector<std::uint64_t> seeds;
};

constexpr std::uint64_t kZeroEnsembleOffset = 1'000'000'000;

Ensemble run_ensemble(const ScenarioConfig& cfg, const PreparationSpec& prep,
                      int n_traj, double duration, std::uint64_t stream_offset,
                      const PhaseTable& table) {
  FockDistribution initial = prepare_initial(prep, cfg.bath);
  Ensemble ens;
  ens.runs.resize(static_cast<size_t>(n_traj));
  ens.traces.resize(static_cast<size_t>(n_traj));
  ens.seeds.resize(static_cast<size_t>(n_traj));
  for (int i = 0; i < n_traj; ++i)
    ens.seeds[static_cast<size_t>(i)] =
        derive_seed(cfg.base_seed, stream_offset + static_cast<std::uint64_t>(i));
  parallel_for(n_traj, cfg.threads, [&](int i) {
    auto k = static_cast<size_t>(i);
    FockLevel n0 = draw_initial(initial, ens.seeds[k]);
    ens.runs[k] = sample_monitored_trajectory(n0, duration, cfg.bath, cfg.arrivals,
                                              cfg.detector, table, ens.seeds[k]);
    ens.traces[k] = decode(ens.runs[k].atoms, cfg.decoder);
  });
  return ens;
}

std::string indexed_name(const std::string& stem, const std::string& ext, int i, int n) {
  if (n == 1) return stem + ext;
  char buf[16];
  std::snprintf(buf, sizeof buf, "_%03d", i);
  return stem + buf + ext;
}

class ArtifactWriter {
 public:
  explicit ArtifactWriter(const std::string& dir) : dir_(dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir + ": " + ec.message());
  }

  void put(const std::string& name, const std::string& content) {
    write_text_file((dir_ / name).string(), content);
    names_.push_back(name);
  }

  const std::vector<std::string>& names() const { return names_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> names_;
};

ordered_json fit_json(const LifetimeFit& fit) {
  ordered_json j;
  j["tau_s"] = fit.tau;
  j["tau_stderr_s"] = fit.tau_stderr;
  j["n_events"] = fit.n_events;
  if (fit.method == FitMethod::binned_loglinear) j["bins_used"] = fit.bins_used;
  return j;
}

ordered_json level_summary(const Ensemble& ens, const FirstJumpResult& result,
                           int n_traj, double duration) {
  ordered_json j;
  j["n_trajectories"] = n_traj;
  j["duration_s"] = duration;
  j["n_events"] = result.event_times.size();
  j["n_censored"] = result.censored_times.size();
  j["n_unconfirmed"] = result.n_unconfirmed;
  long injections = 0;
  for (const MonitoredRun& run : ens.runs) injections += run.injections();
  j["injections"] = injections;
  j["mle"] = fit_json(result.mle);
  j["binned"] = fit_json(result.binned);
  return j;
}

void run_telegraph(const ScenarioConfig& cfg, const PhaseTable& table,
                   ArtifactWriter& out, ordered_json& manifest) {
  Ensemble ens = run_ensemble(cfg, cfg.prep, cfg.n_trajectories, cfg.duration, 0, table);
  ordered_json traces = ordered_json::array();
  for (int i = 0; i < cfg.n_trajectories; ++i) {
    auto k = static_cast<size_t>(i);
    out.put(indexed_name("atoms", ".csv", i, cfg.n_trajectories),
            atoms_to_csv(ens.runs[k].atoms));
    out.put(indexed_name("truth", ".csv", i, cfg.n_trajectories),
            trajectory_to_csv(ens.runs[k].trajectory));
    out.put(indexed_name("decoded", ".csv", i, cfg.n_trajectories),
            decoded_to_csv(ens.traces[k]));
    out.put(indexed_name("jumps", ".json", i, cfg.n_trajectories),
            jumps_to_json(ens.traces[k]));
    ordered_json t;
    t["index"] = i;
    t["seed"] = ens.seeds[k];
    t["n_atoms"] = ens.runs[k].atoms.size();
    t["n_field_jumps"] = ens.runs[k].trajectory.events.size();
    t["n_decoded_jumps"] = ens.traces[k].jumps.size();
    t["injections"] = ens.runs[k].injections();
    t["clamped"] = ens.runs[k].clamped;
    traces.push_back(t);
  }
  ordered_json summary;
  summary["scenario"] = scenario_name(cfg.scenario);
  summary["traces"] = traces;
  out.put("summary.json", summary.dump(2) + "\n");
  manifest["trajectory_seeds"] = ens.seeds;
}

void run_fock_decay(const ScenarioConfig& cfg, const PhaseTable& table,
                    ArtifactWriter& out, ordered_json& manifest) {
  const double grid_start = 0.1;
  const double grid_stop = cfg.duration - 0.05;
  const int grid_points = 20;
  if (!(grid_stop > grid_start))
    throw ConfigError("fock_decay: duration_s must exceed 0.15 s for the analysis grid");
  std::vector<double> grid(grid_points);
  for (int k = 0; k < grid_points; ++k)
    grid[static_cast<size_t>(k)] =
        grid_start + k * (grid_stop - grid_start) / (grid_points - 1);

  Ensemble ens = run_ensemble(cfg, cfg.prep, cfg.n_trajectories, cfg.duration, 0, table);
  EnsembleCurve curve = ensemble_p1(ens.traces, grid);

  FockDistribution p0 = prepare_initial(cfg.prep, cfg.bath);
  std::vector<double> ode_grid;
  ode_grid.reserve(grid.size() + 1);
  ode_grid.push_back(0.0);
  ode_grid.insert(ode_grid.end(), grid.begin(), grid.end());
  std::vector<FockDistribution> evolved = master_equation_evolve(p0, cfg.bath, ode_grid);
  std::vector<double> ode_p1(evolved.size());
  for (size_t k = 0; k < evolved.size(); ++k) ode_p1[k] = evolved[k].p.at(1);

  const double dt = 1.0e-4;
  std::vector<FockDistribution> kick = master_equation_evolve(p0, cfg.bath, {0.0, dt});
  double tau_init = -dt / std::log(kick[1].p.at(1) / kick[0].p.at(1));

  double max_dev = 0.0;
  double max_ratio = 0.0;
  for (size_t k = 0; k < grid.size(); ++k) {
    double dev = std::abs(curve.mean[k] - ode_p1[k + 1]);
    max_dev = std::max(max_dev, dev);
    double se = curve.std_error[k];
    max_ratio = std::max(max_ratio, se > 0.0 ? dev / se : (dev == 0.0 ? 0.0 : 1.0e100));
  }

  out.put("curve.csv", curve_to_csv(curve));
  out.put("ode_overlay.csv", overlay_to_csv(ode_grid, ode_p1));
  ordered_json summary;
  summary["scenario"] = scenario_name(cfg.scenario);
  summary["n_trajectories"] = cfg.n_trajectories;
  summary["grid_start_s"] = grid_start;
  summary["grid_stop_s"] = grid_stop;
  summary["grid_points"] = grid_points;
  summary["ode_initial_decay_s"] = tau_init;
  summary["max_abs_deviation"] = max_dev;
  summary["max_deviation_over_se"] = max_ratio;
  out.put("summary.json", summary.dump(2) + "\n");
  manifest["trajectory_seeds"] = ens.seeds;
}

void run_lifetime_histograms(const ScenarioConfig& cfg, const PhaseTable& table,
                             ArtifactWriter& out, ordered_json& manifest) {
  Ensemble one = run_ensemble(cfg, cfg.prep, cfg.n_trajectories, cfg.duration, 0, table);
  FirstJumpResult result_one = first_jump_histogram(one.traces, cfg.prep);

  PreparationSpec prep_zero{PrepTarget::vacuum_reset, cfg.prep.residual_error};
  Ensemble zero = run_ensemble(cfg, prep_zero, cfg.n_trajectories_zero,
                               cfg.duration_zero, kZeroEnsembleOffset, table);
  FirstJumpResult result_zero = first_jump_histogram(zero.traces, prep_zero);

  out.put("dwells_one.csv", dwells_to_csv(result_one.event_times));
  out.put("dwells_zero.csv", dwells_to_csv(result_zero.event_times));
  out.put("histogram_one.csv",
          histogram_to_csv(result_one.event_times, result_one.mle.tau * 0.25, 20));
  out.put("histogram_zero.csv",
          histogram_to_csv(result_zero.event_times, result_zero.mle.tau * 0.25, 20));
  ordered_json summary;
  summary["scenario"] = scenario_name(cfg.scenario);
  summary["one"] = level_summary(one, result_one, cfg.n_trajectories, cfg.duration);
  summary["zero"] =
      level_summary(zero, result_zero, cfg.n_trajectories_zero, cfg.duration_zero);
  out.put("summary.json", summary.dump(2) + "\n");
  manifest["trajectory_seeds"] = one.seeds;
  manifest["trajectory_seeds_zero"] = zero.seeds;
}

void run_thermometry(const ScenarioConfig& cfg, const PhaseTable& table,
                     ArtifactWriter& out, ordered_json& manifest) {
  Ensemble ens = run_ensemble(cfg, cfg.prep, cfg.n_trajectories, cfg.duration, 0, table);
  ThermometryEstimate est = equilibrium_thermometry(ens.traces, cfg.detector, cfg.decoder);
  ordered_json summary;
  summary["scenario"] = scenario_name(cfg.scenario);
  summary["n_traces"] = est.n_traces;
  summary["total_time_s"] = est.total_time;
  summary["n_jumps"] = est.n_jumps;
  summary["p1_measured"] = est.p1_measured;
  summary["p1_corrected"] = est.p1_corrected;
  summary["n_raw"] = est.n_raw;
  summary["n_corrected"] = est.n_corrected;
  summary["std_error"] = est.std_error;
  out.put("summary.json", summary.dump(2) + "\n");
  manifest["trajectory_seeds"] = ens.seeds;
}

void run_phase_check(const ScenarioConfig& cfg, const PhaseTable& table,
                     ArtifactWriter& out, ordered_json& manifest) {
  ordered_json j;
  j["omega0_hz"] = cfg.geom.omega0;
  j["detuning_hz"] = cfg.geom.detuning;
  j["velocity_mps"] = cfg.geom.velocity;
  j["waist_m"] = cfg.geom.waist;
  j["phi_rad"] = table.phi;
  std::vector<double> rel(table.phi.size());
  std::vector<double> pg(table.phi.size());
  for (int n = 0; n <= table.n_max(); ++n) {
    rel[static_cast<size_t>(n)] = table.relative(n) / kPi;
    pg[static_cast<size_t>(n)] = ideal_detection_probability(n, table);
  }
  j["relative_over_pi"] = rel;
  j["diff_10_over_pi"] = (table.phi.at(1) - table.phi.at(0)) / kPi;
  j["diff_21_over_pi"] = (table.phi.at(2) - table.phi.at(1)) / kPi;
  j["p_ideal_g"] = pg;
  out.put("phases.json", j.dump(2) + "\n");
  manifest["trajectory_seeds"] = ordered_json::array();
}

void run_adiabaticity_check(const ScenarioConfig& cfg, ArtifactWriter& out,
                            ordered_json& manifest) {
  double defect = 0.0;
  double p = adiabatic_transition_probability(0, cfg.geom, 1.0e-13, &defect);
  ordered_json j;
  j["level"] = 0;
  j["transition_probability"] = p;
  j["norm_defect"] = defect;
  j["omega0_hz"] = cfg.geom.omega0;
  j["detuning_hz"] = cfg.geom.detuning;
  j["velocity_mps"] = cfg.geom.velocity;
  out.put("adiabaticity.json", j.dump(2) + "\n");
  manifest["trajectory_seeds"] = ordered_json::array();
}

}  // namespace

std::vector<std::string> run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  ArtifactWriter out(cfg.output_dir);
  ordered_json manifest;
  manifest["tool"] = "photonbox";
  manifest["version"] = kVersion;
  manifest["scenario"] = scenario_name(cfg.scenario);
  manifest["config"] = ordered_json::parse(config_to_json(cfg));

  PhaseTable table = build_phase_table(cfg.geom, cfg.bath.n_max);
  switch (cfg.scenario) {
    case Scenario::telegraph:
      run_telegraph(cfg, table, out, manifest);
      break;
    case Scenario::fock_decay:
      run_fock_decay(cfg, table, out, manifest);
      break;
    case Scenario::lifetime_histograms:
      run_lifetime_histograms(cfg, table, out, manifest);
      break;
    case Scenario::thermometry:
      run_thermometry(cfg, table, out, manifest);
      break;
    case Scenario::phase_check:
      run_phase_check(cfg, table, out, manifest);
      break;
    case Scenario::adiabaticity_check:
      run_adiabaticity_check(cfg, out, manifest);
      break;
  }

  std::vector<std::string> names = out.names();
  names.push_back("manifest.json");
  manifest["artifacts"] = names;
  write_text_file((std::filesystem::path(cfg.output_dir) / "manifest.json").string(),
                  manifest.dump(2) + "\n");
  return names;
}

}  // namespace photonbox

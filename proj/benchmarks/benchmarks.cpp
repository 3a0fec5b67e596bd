#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "photonbox/analysis.hpp"
#include "photonbox/detection_chain.hpp"
#include "photonbox/field_dynamics.hpp"
#include "photonbox/jump_decoder.hpp"
#include "photonbox/probe_physics.hpp"

namespace {

using namespace photonbox;

const BathParams kBath{0.129, 0.063, 5};
const ArrivalParams kArrivals{70.0e-6, 0.063};
const DetectorParams kDetector{0.13, 0.09, 0.0};

const PhaseTable& phase_table() {
  static PhaseTable table = build_phase_table(ProbeGeometry{}, kBath.n_max);
  return table;
}

void BM_SampleTrajectory(benchmark::State& state) {
  const double duration = static_cast<double>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    FieldTrajectory traj = sample_trajectory(0, duration, kBath, seed++);
    benchmark::DoNotOptimize(traj.events.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleTrajectory)->Arg(1)->Arg(10)->Arg(100);

void BM_MonitoredSecond(benchmark::State& state) {
  std::uint64_t seed = 1;
  for (auto _ : state) {
    MonitoredRun run = sample_monitored_trajectory(0, 1.0, kBath, kArrivals, kDetector,
                                                   phase_table(), seed++);
    benchmark::DoNotOptimize(run.atoms.data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_MonitoredSecond);

void BM_Decode(benchmark::State& state) {
  MonitoredRun run = sample_monitored_trajectory(
      0, static_cast<double>(state.range(0)), kBath, kArrivals, kDetector, phase_table(), 7);
  DecoderParams dec{8};
  for (auto _ : state) {
    DecodedTrace trace = decode(run.atoms, dec);
    benchmark::DoNotOptimize(trace.samples.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(run.atoms.size()));
}
BENCHMARK(BM_Decode)->Arg(1)->Arg(10);

void BM_RamseyPhase(benchmark::State& state) {
  ProbeGeometry geom;
  for (auto _ : state) {
    double phi = ramsey_phase(1, geom);
    benchmark::DoNotOptimize(phi);
  }
}
BENCHMARK(BM_RamseyPhase);

void BM_MasterEquation(benchmark::State& state) {
  FockDistribution p0;
  p0.p.assign(kBath.n_max + 1, 0.0);
  p0.p[1] = 1.0;
  std::vector<double> grid;
  for (int k = 0; k <= 10; ++k) grid.push_back(0.1 * k);
  for (auto _ : state) {
    std::vector<FockDistribution> evolved = master_equation_evolve(p0, kBath, grid);
    benchmark::DoNotOptimize(evolved.data());
  }
}
BENCHMARK(BM_MasterEquation);

void BM_AdiabaticTransit(benchmark::State& state) {
  ProbeGeometry geom;
  for (auto _ : state) {
    double p = adiabatic_transition_probability(0, geom);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_AdiabaticTransit);

}  // namespace

BENCHMARK_MAIN();

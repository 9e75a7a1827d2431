// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "holoairy/beamformer.hpp"
#include "holoairy/propagation.hpp"
#include "holoairy/scenario.hpp"

using namespace holoairy;

namespace {

const Scenario& reference_scenario() {
  static const Scenario s = [] {
    ScenarioConfig cfg;
    cfg.noise_power = 1e-12; // skip the calibration run
    return resolve(cfg);
  }();
  return s;
}

void BM_AsmStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const GridSpec grid{0.0, 3e-4, n};
  const AsmPropagator prop(grid, wavenumber_for(100e9), 5e-3);
  std::vector<cplx> v(n, cplx(1.0, 0.0));
  for (auto _ : state) {
    prop.step(v);
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AsmStep)->RangeMultiplier(4)->Range(1 << 10, 1 << 14);

void BM_AiryExcitation(benchmark::State& state) {
  const Scenario& s = reference_scenario();
  const Trajectory traj = solve_ab_from_c(s.scene.receiver, {-0.11, 0.6}, 0.04);
  for (auto _ : state) benchmark::DoNotOptimize(airy_rhs(s.rhs, traj));
}
BENCHMARK(BM_AiryExcitation);

void BM_ReceivedPower(benchmark::State& state) {
  const Scenario& s = reference_scenario();
  const auto exc = airy_rhs(s.rhs, solve_ab_from_c(s.scene.receiver, {-0.11, 0.6}, 0.04));
  for (auto _ : state) benchmark::DoNotOptimize(s.power_of(exc));
}
BENCHMARK(BM_ReceivedPower)->Unit(benchmark::kMillisecond);

void BM_DirectQuadrature(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  FieldSlice slice;
  slice.grid = {0.0, 7.5e-4, n};
  slice.values.assign(n, cplx(1.0, 0.0));
  for (auto _ : state) benchmark::DoNotOptimize(rs_direct(slice, 0.1, wavenumber_for(100e9)));
}
BENCHMARK(BM_DirectQuadrature)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();

// Serial versus OpenMP ensemble throughput on a small stochastic configuration.

#include <cmath>
#include <numbers>

#include <benchmark/benchmark.h>

#include "qns/ensemble.hpp"

namespace {

using namespace qns;

struct Setup {
  TorusGrid grid{64, 21};
  ModelParams params;
  NoiseModel noise;
  StepConfig step;
  EnsembleConfig ensemble;
  InitialFactory initial;

  explicit Setup(int paths) {
    noise.base_amplitude = 0.3;
    step.dt = 1e-3;
    step.t_end = 0.05;
    ensemble.n_paths = paths;
    ensemble.master_seed = 3;
    ensemble.output_stride = 10;
    const TorusGrid g = grid;
    initial = [g](std::uint64_t) {
      constexpr double two_pi = 2.0 * std::numbers::pi;
      return state_from_functions(g, [](double x) { return 1.0 + 0.2 * std::cos(two_pi * x); },
                                  [](double x) { return 0.1 * std::sin(two_pi * x); });
    };
  }
};

void BM_EnsembleSerial(benchmark::State& state) {
  const Setup s(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        run_ensemble_serial(s.ensemble, s.initial, s.step, s.params, s.noise, s.grid));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EnsembleOpenMP(benchmark::State& state) {
  const Setup s(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(run_ensemble(s.ensemble, s.initial, s.step, s.params, s.noise, s.grid));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_EnsembleSerial)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EnsembleOpenMP)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();

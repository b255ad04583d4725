#include <benchmark/benchmark.h>

#include "pvt/pde.hpp"
#include "pvt/transition.hpp"

using namespace pvt;

static void BM_ReducedRoots(benchmark::State& state) {
  const ReducedCoeffs rc{-0.21, 1.0, 1.0, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(reduced_steady_states(rc));
}
BENCHMARK(BM_ReducedRoots);

static void BM_FullSteadyStates(benchmark::State& state) {
  const auto model = vdw_compatible_model(VdwParams{});
  const ThermoState s{0.26, 0.025};
  for (auto _ : state) benchmark::DoNotOptimize(full_steady_states(s, model));
}
BENCHMARK(BM_FullSteadyStates);

static void BM_AndrewsPoint(benchmark::State& state) {
  const auto model = vdw_compatible_model(VdwParams{});
  for (auto _ : state) benchmark::DoNotOptimize(andrews_point(model, AndrewsGuess{0.3, 0.3, 0.04}));
}
BENCHMARK(BM_AndrewsPoint);

static void BM_CriticalCurve(benchmark::State& state) {
  const auto model = vdw_compatible_model(VdwParams{});
  const SweepWindow w{0.1, 0.4, 400};
  for (auto _ : state) benchmark::DoNotOptimize(critical_curve_trace(model, 0.005, 0.035, 10, w));
}
BENCHMARK(BM_CriticalCurve)->Unit(benchmark::kMillisecond);

static void BM_PdeStep(benchmark::State& state) {
  auto model = vdw_compatible_model(VdwParams{});
  model.mu1 = model.mu2 = 0.01;
  const int n = static_cast<int>(state.range(0));
  const ThermoState s{0.26, 0.025};
  Field1D f = Field1D::uniform(n, 1.0 / (n - 1), 0.3, 0.0);
  for (auto _ : state) {
    f = step(f, s, model, 1e-3, PdeScheme::SemiImplicit);
    benchmark::DoNotOptimize(f.rho.data());
  }
}
BENCHMARK(BM_PdeStep)->Arg(101)->Arg(1001);
BENCHMARK_MAIN();

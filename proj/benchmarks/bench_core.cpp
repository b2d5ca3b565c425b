#include <benchmark/benchmark.h>

#include "mrac/harness.hpp"
#include "mrac/matching.hpp"
#include "mrac/synthetic.hpp"

using namespace mrac;

static void BM_SolveMatchingBoeing(benchmark::State& state) {
  const MatchingProblem mp = boeing_scenario(BoeingCase::i).matching_problem();
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_matching(mp));
  }
}
BENCHMARK(BM_SolveMatchingBoeing);

static void BM_ClosedLoopDerivative(benchmark::State& state) {
  const ClosedLoop loop = assemble_closed_loop(boeing_scenario(BoeingCase::i));
  const VectorXd x = loop.initial_state();
  const double sigma = loop.select_sigma(x);
  VectorXd dx(x.size());
  for (auto _ : state) {
    loop.derivative(0.5, x, sigma, dx);
    benchmark::DoNotOptimize(dx.data());
  }
  state.counters["states"] = static_cast<double>(x.size());
}
BENCHMARK(BM_ClosedLoopDerivative);

static void BM_ClosedLoopRk4Step(benchmark::State& state) {
  const ClosedLoop loop = assemble_closed_loop(boeing_scenario(BoeingCase::ii));
  VectorXd x = loop.initial_state();
  double t = 0.0;
  const double dt = 1e-3;
  for (auto _ : state) {
    const double sigma = loop.select_sigma(x);
    x = rk4_step([&](double tt, const VectorXd& xx) { return loop.derivative(tt, xx, sigma); }, t,
                 x, dt);
    loop.post_step(x);
    t += dt;
  }
}
BENCHMARK(BM_ClosedLoopRk4Step);

// Whole runs, with and without the per-step Theta* diagnostics.
static void BM_RunScenario(benchmark::State& state) {
  ScenarioConfig cfg = boeing_scenario(BoeingCase::i);
  cfg.sim.t_final = 10.0;
  cfg.diagnostics = state.range(0) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_scenario(cfg));
  }
}
BENCHMARK(BM_RunScenario)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_SyntheticRun(benchmark::State& state) {
  SyntheticSpec spec;
  spec.n = static_cast<int>(state.range(0));
  spec.m = 1;
  ScenarioConfig cfg = synthetic_scenario(spec);
  cfg.sim.t_final = 10.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_scenario(cfg));
  }
}
BENCHMARK(BM_SyntheticRun)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();

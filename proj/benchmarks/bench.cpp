#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "pepkit/bounds.hpp"
#include "pepkit/pep.hpp"
#include "pepkit/schedule.hpp"
#include "pepkit/simulate.hpp"
#include "pepkit/stepopt.hpp"

using namespace pepkit;

namespace {

void BM_AssembleDual(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const StepSchedule s = fgm_schedule(n, FgmVariant::kMain);
  for (auto _ : state) {
    const PepMatrices m(s);
    benchmark::DoNotOptimize(dual_sdp_problem(m));
  }
}
BENCHMARK(BM_AssembleDual)->Arg(10)->Arg(40);

void BM_NumericBoundGm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const StepSchedule s = gm_schedule(n, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(numeric_bound(s));
}
BENCHMARK(BM_NumericBoundGm)->Arg(5)->Arg(10)->Arg(20)->Arg(40);

void BM_NumericBoundHbm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const StepSchedule s = hbm_schedule(n, 1.0, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(numeric_bound(s));
}
BENCHMARK(BM_NumericBoundHbm)->Arg(5)->Arg(20);

void BM_SolveLin(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_lin(n));
}
BENCHMARK(BM_SolveLin)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_RunFo(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const StepSchedule s = fgm_schedule(n, FgmVariant::kMain);
  const FunctionOracle oracle = random_quadratic_oracle(16, 1.0, 42);
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(16);
  x0(0) = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(run_fo(oracle, s, x0));
}
BENCHMARK(BM_RunFo)->Arg(50)->Arg(200);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "cholesteric/bulk.hpp"
#include "cholesteric/energy.hpp"
#include "cholesteric/fields.hpp"
#include "cholesteric/kernels.hpp"
#include "cholesteric/minimize.hpp"
#include "cholesteric/periodize.hpp"

using namespace chol;

static void BM_Periodize(benchmark::State& state) {
  const TorusGrid g(static_cast<int>(state.range(0)));
  const OperatorKernel k(KernelSet::demo().HH);
  for (auto _ : state) benchmark::DoNotOptimize(periodize(k, 0.25, g));
}
BENCHMARK(BM_Periodize)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_ConvolveFft(benchmark::State& state) {
  const TorusGrid g(static_cast<int>(state.range(0)));
  const PeriodizedKernel p = periodize(OperatorKernel(KernelSet::demo().cH), 0.25, g);
  const QField f = random_field(g, 1, 0.1, false);
  for (auto _ : state) benchmark::DoNotOptimize(convolve_fft(f.Q, p));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_ConvolveFft)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_EnergyAndGradientThin(benchmark::State& state) {
  const TorusGrid g = TorusGrid::thin(static_cast<int>(state.range(0)));
  const EnergyModel model(KernelSet::demo(), kDemoRho0, 0.125, g);
  const QField f = helical_ansatz(0.5, solve_s0(0.1), solve_sc(0.1, 1.75), g);
  QField grad(g);
  for (auto _ : state) benchmark::DoNotOptimize(model.energy_and_gradient(f, grad));
}
BENCHMARK(BM_EnergyAndGradientThin)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_EnergyAndGradientFull(benchmark::State& state) {
  const TorusGrid g(static_cast<int>(state.range(0)));
  const EnergyModel model(KernelSet::demo(), kDemoRho0, 0.5, g);
  QField f = helical_ansatz(0.5, 0.6, 0.7, g);
  const QField r = random_field(g, 2, 0.02, false);
  for (std::size_t i = 0; i < g.size(); ++i) f.Q[i] = f.Q[i] + r.Q[i];
  QField grad(g);
  for (auto _ : state) benchmark::DoNotOptimize(model.energy_and_gradient(f, grad));
}
BENCHMARK(BM_EnergyAndGradientFull)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_MinimizeFromHelix(benchmark::State& state) {
  const TorusGrid g = TorusGrid::thin(32);
  const EnergyModel model(KernelSet::demo(), kDemoRho0, 0.25, g);
  const QField start = helical_ansatz(0.5, solve_s0(0.1), solve_sc(0.1, 1.75), g);
  for (auto _ : state) benchmark::DoNotOptimize(minimize(start, model));
}
BENCHMARK(BM_MinimizeFromHelix)->Unit(benchmark::kMillisecond)->Iterations(3);

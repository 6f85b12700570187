#include <benchmark/benchmark.h>

#include "cholesteric/bulk.hpp"
#include "cholesteric/entropy.hpp"
#include "cholesteric/kernels.hpp"

using namespace chol;

static void BM_LambdaOfBiaxial(benchmark::State& state) {
  const QTensor q = uniaxial(0.6, Vec3(1, 2, 3).normalized()) + 0.05 * sigma(Vec3::UnitX());
  for (auto _ : state) benchmark::DoNotOptimize(lambda_of(q));
}
BENCHMARK(BM_LambdaOfBiaxial);

static void BM_LambdaOfWarm(benchmark::State& state) {
  const QTensor q = uniaxial(0.6, Vec3(1, 2, 3).normalized()) + 0.05 * sigma(Vec3::UnitX());
  const QTensor warm = lambda_of(q) * 1.01;
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_potential(q, SphereQuadrature::standard(), &warm));
}
BENCHMARK(BM_LambdaOfWarm);

static void BM_InverseLambda(benchmark::State& state) {
  const QTensor a = 8.0 * sigma(Vec3(1, 1, 0).normalized()) + 2.0 * sigma(Vec3::UnitZ());
  for (auto _ : state) benchmark::DoNotOptimize(inverse_lambda(a));
}
BENCHMARK(BM_InverseLambda);

static void BM_SolveS0(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(solve_s0(0.1));
}
BENCHMARK(BM_SolveS0);

static void BM_HtpMap(benchmark::State& state) {
  std::vector<double> taus, alphas;
  for (int i = 0; i < state.range(0); ++i) {
    taus.push_back(0.02 + 0.12 * i / (state.range(0) - 1));
    alphas.push_back(0.15 + 1.85 * i / (state.range(0) - 1));
  }
  for (auto _ : state) benchmark::DoNotOptimize(htp_map(taus, alphas));
}
BENCHMARK(BM_HtpMap)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_FrankConstants(benchmark::State& state) {
  const KernelSet ks = KernelSet::demo();
  for (auto _ : state) benchmark::DoNotOptimize(frank_constants(ks.HH, 0.8));
}
BENCHMARK(BM_FrankConstants)->Unit(benchmark::kMillisecond);

#include <benchmark/benchmark.h>

#include "garding/majorization.hpp"

using namespace garding;

namespace {

SymMatrix fixture(int n, std::uint64_t stream) {
  return random_spd(n, Rng::derive(7, stream, 0), 2.0);
}

void BM_EvaluateDet4(benchmark::State& state) {
  const OpPtr g = GardingOperator::det(4);
  const SymMatrix A = fixture(4, 1);
  for (auto _ : state) benchmark::DoNotOptimize(g->evaluate(A));
}
BENCHMARK(BM_EvaluateDet4);

void BM_EvaluateSigma42(benchmark::State& state) {
  const OpPtr g = GardingOperator::sigma(4, 2);
  const SymMatrix A = fixture(4, 2);
  for (auto _ : state) benchmark::DoNotOptimize(g->evaluate(A));
}
BENCHMARK(BM_EvaluateSigma42);

void BM_EvaluateMaLag6(benchmark::State& state) {
  const OpPtr g = GardingOperator::ma_lag(6);
  const SymMatrix A = fixture(6, 3);
  for (auto _ : state) benchmark::DoNotOptimize(g->evaluate(A));
}
BENCHMARK(BM_EvaluateMaLag6);

void BM_EvaluateLogMaLag8(benchmark::State& state) {
  const OpPtr g = GardingOperator::ma_lag(8);
  const SymMatrix A = fixture(8, 4);
  for (auto _ : state) benchmark::DoNotOptimize(g->evaluate_log(A));
}
BENCHMARK(BM_EvaluateLogMaLag8);

void BM_GardingEigenvaluesDet4(benchmark::State& state) {
  const OpPtr g = GardingOperator::det(4);
  const SymMatrix A(random_symmetric(4, Rng::derive(7, 5, 0)));
  const SymMatrix I = SymMatrix::identity(4);
  for (auto _ : state) benchmark::DoNotOptimize(garding_eigenvalues(g, I, A));
}
BENCHMARK(BM_GardingEigenvaluesDet4);

void BM_GradientMaLag4(benchmark::State& state) {
  const OpPtr g = GardingOperator::ma_lag(4);
  const SymMatrix A = fixture(4, 6);
  for (auto _ : state) benchmark::DoNotOptimize(gradient(g, A));
}
BENCHMARK(BM_GradientMaLag4);

void BM_DiagonalRestrictionSigma42(benchmark::State& state) {
  const OpPtr g = GardingOperator::sigma(4, 2);
  for (auto _ : state) benchmark::DoNotOptimize(diagonal_restriction(g));
}
BENCHMARK(BM_DiagonalRestrictionSigma42);

void BM_RandomSpd6(benchmark::State& state) {
  std::uint64_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(random_spd(6, Rng::derive(7, 8, i++), 2.0));
  }
}
BENCHMARK(BM_RandomSpd6);

void BM_CheckMajorizationDet3(benchmark::State& state) {
  const OpPtr g = GardingOperator::det(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_majorization(g, 200, 50, 42));
  }
}
BENCHMARK(BM_CheckMajorizationDet3);

}  // namespace

BENCHMARK_MAIN();

#include "hdgc/network.hpp"
#include "hdgc/pdslm.hpp"
#include "hdgc/regress.hpp"
#include "hdgc/simulate.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace hdgc;

namespace {

TimeSeriesPanel sparse_var(Index K, Index T, bool unit_root) {
  VarProcessSpec spec;
  spec.K = K;
  Matrix A = (unit_root ? 1.0 : 0.5) * Matrix::Identity(K, K);
  if (!unit_root)
    for (Index k = 1; k < K; ++k) A(k, k - 1) = 0.2;
  spec.coefficients = {A};
  spec.error_covariance = Matrix::Identity(K, K);
  spec.integration = unit_root ? Integration::unit_root_diagonal : Integration::stationary;
  spec.seed = 9;
  return demean(simulate_var(spec, T));
}

}  // namespace

static void BM_LassoPath(benchmark::State& state) {
  const auto N = state.range(0);
  const Index T = 100;
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z;
  Matrix X(T, N);
  for (Index j = 0; j < N; ++j)
    for (Index i = 0; i < T; ++i) X(i, j) = z(rng);
  Vector y = X.leftCols(5).rowwise().sum();
  for (Index i = 0; i < T; ++i) y(i) += z(rng);
  for (auto _ : state) benchmark::DoNotOptimize(lasso_bic(X, y, Vector::Ones(N), 100, 1e-3));
}
BENCHMARK(BM_LassoPath)->Arg(30)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

static void BM_PdsLmPair(benchmark::State& state) {
  const auto panel = sparse_var(state.range(0), 150, false);
  GcQuery q;
  q.caused = {"y2"};
  q.causing = {"y1"};
  q.spec = {3, 2};
  for (auto _ : state) benchmark::DoNotOptimize(pds_lm_test(panel, q));
}
BENCHMARK(BM_PdsLmPair)->Arg(6)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_PdsLmUnitRoot(benchmark::State& state) {
  const auto panel = sparse_var(10, 150, true);
  GcQuery q;
  q.caused = {"y2"};
  q.causing = {"y1"};
  q.spec = {static_cast<int>(state.range(0)), 2};
  for (auto _ : state) benchmark::DoNotOptimize(pds_lm_test(panel, q));
}
BENCHMARK(BM_PdsLmUnitRoot)->Arg(3)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_Network(benchmark::State& state) {
  const auto panel = sparse_var(10, 150, false);
  NetworkOptions opt;
  opt.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_network(panel, {3, 2}, 0.1, opt));
}
BENCHMARK(BM_Network)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "doflab/bounds.hpp"
#include "doflab/engine.hpp"
#include "doflab/polytope.hpp"
#include "doflab/rates.hpp"
#include "doflab/scheme.hpp"

using namespace doflab;

static void BM_Theorem1Rows(benchmark::State& state) {
  const int users = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(theorem1_inequalities(users, 1));
}
BENCHMARK(BM_Theorem1Rows)->DenseRange(3, 6);

static void BM_SliceVertices(benchmark::State& state) {
  const auto s = slice(restrict_private(full_region(3, 1)), {{UserSubset::of({1}), Rational(1)}});
  for (auto _ : state) benchmark::DoNotOptimize(vertices(s));
}
BENCHMARK(BM_SliceVertices);

static void BM_MaximizeFullRegion(benchmark::State& state) {
  const auto r = full_region(3, 1);
  std::map<UserSubset, Rational> w;
  for (const auto& s : canonical_subsets(3)) w[s] = Rational(1);
  for (auto _ : state) benchmark::DoNotOptimize(maximize(r, w));
}
BENCHMARK(BM_MaximizeFullRegion);

static void BM_RemoveRedundant(benchmark::State& state) {
  const auto r = full_region(3, 1);
  for (auto _ : state) benchmark::DoNotOptimize(remove_redundant(r));
}
BENCHMARK(BM_RemoveRedundant);

static void BM_Trial(benchmark::State& state) {
  const auto s = parse_scheme(builtin("alt-npp-4over9"));
  const auto mode = static_cast<ArithmeticMode>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_trial(s, seed++, mode));
}
BENCHMARK(BM_Trial)->Arg(0)->Arg(1)->Arg(2);

static void BM_RankPrimeField(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Matrix<ModP> m(n, n);
  for (std::size_t i = 0; i < m.data.size(); ++i) m.data[i] = ModP(keyed_draw(7, 1, i));
  for (auto _ : state) benchmark::DoNotOptimize(rank(m));
}
BENCHMARK(BM_RankPrimeField)->RangeMultiplier(2)->Range(8, 64);

static void BM_RateSlope(benchmark::State& state) {
  const auto s = parse_scheme(builtin("hybrid-5over3-a"));
  for (auto _ : state) benchmark::DoNotOptimize(dof_slope(s, 1, {60, 100}));
}
BENCHMARK(BM_RateSlope);
BENCHMARK_MAIN();

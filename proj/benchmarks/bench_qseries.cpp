#include <benchmark/benchmark.h>

#include "nahm/corpus.hpp"
#include "nahm/nahm_sum.hpp"
#include "nahm/partitions.hpp"
#include "nahm/qseries.hpp"

using namespace nahm;

static void BM_PochhammerInv(benchmark::State& state) {
  long order = state.range(0);
  const Identity* cap1 = find_identity("cap1");
  for (auto _ : state) {
    QSeriesTrunc s = pochhammer_inv(cap1->product, order);
    benchmark::DoNotOptimize(s);
  }
  state.SetComplexityN(order);
}
BENCHMARK(BM_PochhammerInv)->RangeMultiplier(2)->Range(64, 512)->Complexity();

static void BM_NahmExpandCapparelli(benchmark::State& state) {
  long order = state.range(0);
  const Identity* cap1 = find_identity("cap1");
  for (auto _ : state) {
    QSeriesTrunc s = nahm_expand(cap1->sum_forms[0][0], order);
    benchmark::DoNotOptimize(s);
  }
  state.SetComplexityN(order);
}
BENCHMARK(BM_NahmExpandCapparelli)->RangeMultiplier(2)->Range(64, 512)->Complexity();

static void BM_EulerFactorize(benchmark::State& state) {
  long order = state.range(0);
  const Identity* cap1 = find_identity("cap1");
  QSeriesTrunc f = nahm_expand_sum(cap1->sum_forms[0], order);
  for (auto _ : state) {
    auto e = euler_factorize(f);
    benchmark::DoNotOptimize(e);
  }
}
BENCHMARK(BM_EulerFactorize)->Arg(60)->Arg(120)->Arg(240);

static void BM_EnumerateConditionPartitions(benchmark::State& state) {
  for (auto _ : state) {
    QSeriesTrunc s = enumerate_condition_partitions(ConditionKind::kr5, state.range(0));
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_EnumerateConditionPartitions)->Arg(40)->Arg(60)->Arg(80);

BENCHMARK_MAIN();

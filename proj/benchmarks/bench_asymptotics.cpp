#include <benchmark/benchmark.h>

#include "nahm/asymptotics.hpp"
#include "nahm/corpus.hpp"
#include "nahm/search.hpp"

using namespace nahm;

static void BM_SolveQ(benchmark::State& state) {
  PrecisionContext ctx(static_cast<int>(state.range(0)));
  const FamilySpec& fam = family("mod9");
  for (auto _ : state) {
    auto Q = solve_Q(fam.A, fam.J, ctx);
    benchmark::DoNotOptimize(Q);
  }
}
BENCHMARK(BM_SolveQ)->Arg(60)->Arg(120)->Arg(240);

static void BM_TermConstants(benchmark::State& state) {
  // one grid point's beta/gamma/c_1..c_4, towers rebuilt every time
  PrecisionContext ctx(static_cast<int>(state.range(0)));
  const FamilySpec& fam = family("mod9");
  long b = 0;
  for (auto _ : state) {
    NahmFamily engine(fam.A, fam.J, 4, ctx);
    auto t = engine.term({Rational(b % 40), Rational((b + 7) % 40)}, Rational(0));
    benchmark::DoNotOptimize(t);
    ++b;
  }
}
BENCHMARK(BM_TermConstants)->Arg(60)->Arg(120);

static void BM_ResidualCombination(benchmark::State& state) {
  PrecisionContext ctx(60);
  const FamilySpec& fam = family("capparelli");
  NahmFamily engine(fam.A, fam.J, 4, ctx);
  auto t1 = engine.term({Rational(1), Rational(0)}, Rational(0));
  auto t2 = engine.term({Rational(4), Rational(6)}, Rational(2));
  for (auto _ : state) {
    ResidualReport rep = modularity_residuals({t1, t2}, 4);
    benchmark::DoNotOptimize(rep);
  }
}
BENCHMARK(BM_ResidualCombination);

static void BM_ScanCapparelliGrid(benchmark::State& state) {
  SearchSpec spec = SearchSpec::for_family("capparelli", 2, Rational(0), Rational(6));
  spec.threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto records = scan(spec);
    benchmark::DoNotOptimize(records);
  }
}
BENCHMARK(BM_ScanCapparelliGrid)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

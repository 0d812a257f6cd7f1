#include <benchmark/benchmark.h>

#include <random>

#include "tangotower/artin_schreier.hpp"
#include "tangotower/pbundle.hpp"
#include "tangotower/searches.hpp"
#include "tangotower/tower.hpp"

namespace {

using namespace tango;

TowerClass random_class(std::mt19937_64& rng, int level) {
  std::vector<Rat> f;
  for (int i = 0; i < level; ++i) f.push_back(make_rat(static_cast<long>(rng() % 19) - 9,
                                                       1 + static_cast<long>(rng() % 9)));
  return TowerClass(Rat(0), make_rat(static_cast<long>(rng() % 19) - 9, 3), std::move(f));
}

void BM_TowerClassAdd(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const TowerClass a = random_class(rng, static_cast<int>(state.range(0)));
  const TowerClass b = random_class(rng, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(add(a, b));
}
BENCHMARK(BM_TowerClassAdd)->Arg(2)->Arg(8)->Arg(32);

void BM_StepChain(benchmark::State& state) {
  for (auto _ : state) {
    TowerState s = base_from_tango_curve(5, 42, 7);
    for (long k : {7L, 3L, 2L}) s = step_I(s, k);
    benchmark::DoNotOptimize(classify_canonical(s).trivial());
  }
}
BENCHMARK(BM_StepChain);

void BM_CoverSummands(benchmark::State& state) {
  const TowerClass d_prime = TowerClass::base_degree(Rat(1));
  for (auto _ : state) {
    const SummandList s = cyclic_cover_summands(13, 20, 7, d_prime);
    benchmark::DoNotOptimize(pushforward_structure(s));
  }
}
BENCHMARK(BM_CoverSummands);

void BM_DifferentialValuation(benchmark::State& state) {
  const ArtinSchreierCurve curve = raynaud_family(3, 2);
  std::mt19937_64 rng(2);
  CurveFunction eta;
  for (int t = 0; t < 6; ++t)
    eta = cf_add(curve, eta,
                 CurveFunction::monomial(static_cast<long>(rng() % 6),
                                         static_cast<long>(rng() % 3), 1));
  for (auto _ : state) {
    const CurveFunction h = differential_of(curve, eta);
    if (!h.is_zero()) benchmark::DoNotOptimize(infinity_valuation(curve, h, true));
  }
}
BENCHMARK(BM_DifferentialValuation);

void BM_FiniteDegreeOracle(benchmark::State& state) {
  const ArtinSchreierCurve curve = raynaud_family(3, 2);
  const CurveFunction h = differential_of(curve, CurveFunction::y());
  for (auto _ : state)
    benchmark::DoNotOptimize(brute_force_divisor_degree(curve, h, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_FiniteDegreeOracle)->Arg(1)->Arg(2)->Arg(3);

void BM_K3Search(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(surface_k3_search(97, 10000, 1));
}
BENCHMARK(BM_K3Search);

}  // namespace

BENCHMARK_MAIN();

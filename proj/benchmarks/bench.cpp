#include <benchmark/benchmark.h>

#include <vector>

#include "cf/combinat.hpp"
#include "cf/ito.hpp"
#include "cf/moments.hpp"
#include "cf/rng.hpp"

static void BM_HierarchySweep8(benchmark::State& state) {
  for (auto _ : state) {
    cf::HierarchyCursor cur(8);
    long long n = 0;
    while (cur.advance()) ++n;
    benchmark::DoNotOptimize(n);
  }
}
BENCHMARK(BM_HierarchySweep8);

static void BM_PartitionSweep(benchmark::State& state) {
  std::vector<int> ground;
  for (int i = 1; i <= int(state.range(0)); ++i) ground.push_back(i);
  for (auto _ : state) {
    cf::PartitionStream ps(ground);
    long long n = 0;
    while (ps.next()) ++n;
    benchmark::DoNotOptimize(n);
  }
}
BENCHMARK(BM_PartitionSweep)->Arg(9)->Arg(11);

static void BM_MomentsFromCumulants(benchmark::State& state) {
  cf::MomentSequence k{cf::MomentKind::cumulant, {}};
  k.values.emplace_back(0);
  for (int n = 1; n <= int(state.range(0)); ++n) k.values.emplace_back(n, n + 2);
  for (auto _ : state) {
    auto m = cf::cumulants_to_moments(k);
    benchmark::DoNotOptimize(m);
  }
}
BENCHMARK(BM_MomentsFromCumulants)->Arg(10)->Arg(14);

static void BM_WienerOffdiag(benchmark::State& state) {
  auto path = cf::sample_wiener({1.0, 10000}, cf::Rng(5));
  for (auto _ : state) {
    double v = cf::offdiag_wiener(path, int(state.range(0)));
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_WienerOffdiag)->Arg(4)->Arg(8);

BENCHMARK_MAIN();

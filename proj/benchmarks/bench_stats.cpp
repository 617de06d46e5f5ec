#include <benchmark/benchmark.h>

#include "ambientis/rng.hpp"
#include "ambientis/stats.hpp"

namespace {

using namespace ambientis;

void BM_StudentT(benchmark::State& state) {
  const int dof = static_cast<int>(state.range(0));
  for (auto _ : state) {
    for (int i = 0; i < 50; ++i) {
      benchmark::DoNotOptimize(student_t_two_tailed_p(13.0 * i / 49.0, dof));
    }
  }
  state.SetItemsProcessed(state.iterations() * 50);
}
BENCHMARK(BM_StudentT)->Arg(1)->Arg(7)->Arg(50);

void BM_PairedTTest(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(5);
  PairedSample sample;
  sample.feature = "bench";
  for (int i = 0; i < n; ++i) {
    const double a = rng.next_real(0.0, 1.0);
    sample.pairs.emplace_back(a, a + rng.next_real(-0.1, 0.1));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(paired_t_test(sample));
  }
}
BENCHMARK(BM_PairedTTest)->Arg(8)->Arg(21);

}  // namespace

BENCHMARK_MAIN();

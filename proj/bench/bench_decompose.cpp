// Multistart decomposition: serial reference against the OpenMP batches.
// Every start runs (no early exit) so both variants do identical work.
#include <benchmark/benchmark.h>

#include "cubic/constructions.hpp"

using namespace cubic;

namespace {

DecomposeOptions all_starts(int threads) {
  DecomposeOptions o;
  o.starts = 64;
  o.seed = 2024;
  o.threads = threads;
  o.stop_at_first_success = false;
  return o;
}

void BM_serial(benchmark::State& state) {
  const auto c = new_weierstrass(0, ComplexPair{0, 1});
  const int d = static_cast<int>(state.range(0));
  const auto f = random_atomic_functional(c, d, 3 * d + 2, 99);
  const auto o = all_starts(1);
  for (auto _ : state) benchmark::DoNotOptimize(decompose_serial(c, f.L, 3 * d, o));
  state.SetItemsProcessed(state.iterations() * o.starts);
}

void BM_parallel(benchmark::State& state) {
  const auto c = new_weierstrass(0, ComplexPair{0, 1});
  const int d = static_cast<int>(state.range(0));
  const auto f = random_atomic_functional(c, d, 3 * d + 2, 99);
  const auto o = all_starts(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(decompose(c, f.L, 3 * d, o));
  state.SetItemsProcessed(state.iterations() * o.starts);
}

}  // namespace

BENCHMARK(BM_serial)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_parallel)->ArgsProduct({{1, 2}, {1, 2, 4, 8}})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();

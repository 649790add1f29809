#include <benchmark/benchmark.h>

#include "cuckoo_rw/cuckoo_table.hpp"
#include "cuckoo_rw/hypergraph.hpp"

using namespace cuckoo_rw;

// Fills a table to load c and reports insertions per second.
static void BM_Insert(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  const double c = state.range(1) / 100.0;
  const auto m = static_cast<std::uint64_t>(c * n);
  std::uint64_t round = 0;
  for (auto _ : state) {
    state.PauseTiming();
    HashFamily f(3, n, round);
    for (ItemId x = 0; x < m; ++x) (void)f.positions(x);
    CuckooTable t(f, ++round);
    state.ResumeTiming();
    for (ItemId x = 0; x < m; ++x) benchmark::DoNotOptimize(t.insert(x, 100000));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * m));
}
BENCHMARK(BM_Insert)->Args({1 << 14, 50})->Args({1 << 14, 85})->Args({1 << 17, 85})->Args({1 << 17, 90})
    ->Unit(benchmark::kMillisecond);

static void BM_IsOrientable(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  const Hypergraph g = sample_hypergraph(n, static_cast<std::uint64_t>(0.9 * n), 3, 1);
  for (auto _ : state) benchmark::DoNotOptimize(is_orientable(g));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * g.edge_count()));
}
BENCHMARK(BM_IsOrientable)->Arg(1 << 14)->Arg(1 << 17)->Unit(benchmark::kMillisecond);

static void BM_StripCore(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  const Hypergraph g = sample_hypergraph(n, static_cast<std::uint64_t>(0.85 * n), 3, 2);
  for (auto _ : state) benchmark::DoNotOptimize(strip_core(g));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * g.edge_count()));
}
BENCHMARK(BM_StripCore)->Arg(1 << 14)->Arg(1 << 17)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();

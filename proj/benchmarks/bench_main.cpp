// Microbenchmarks for the hot paths: exact gray-code enumeration, heat-bath
// sweeps, vortex enumeration and the partition stream.
#include <benchmark/benchmark.h>

#include "z2lgt/cluster.hpp"
#include "z2lgt/search2d.hpp"
#include "z2lgt/loops.hpp"
#include "z2lgt/mcmc.hpp"
#include "z2lgt/model.hpp"
#include "z2lgt/ursell.hpp"

using namespace z2lgt;

namespace {

void BM_ExactEnumeration5x5(benchmark::State& state) {
  BoxGeometry box({0, 0}, {4, 4});
  Chain loop = rectangle_loop(box, {1, 1}, 2, 2);
  for (auto _ : state) {
    JointCounts counts = exact_joint_counts(box, {loop}, true);
    benchmark::DoNotOptimize(counts.moment(0.7, 1u));
  }
  state.SetItemsProcessed(state.iterations() * (1 << 16));
}
BENCHMARK(BM_ExactEnumeration5x5);

void BM_McmcSweeps(benchmark::State& state) {
  BoxGeometry box({0, 0, 0}, {3, 3, 3});
  Chain loop = rectangle_loop(box, {1, 1, 1}, 1, 1);
  ModelParams params{box, 1.2};
  McmcOptions opts;
  opts.sweeps = state.range(0);
  opts.seed = 1;
  for (auto _ : state) {
    auto [mean, se] = mcmc_estimate(params, loop, opts);
    benchmark::DoNotOptimize(mean + se);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * box.num_cells(1));
}
BENCHMARK(BM_McmcSweeps)->Arg(1000);

void BM_VortexEnumeration(benchmark::State& state) {
  BoxGeometry box({0, 0, 0}, {3, 3, 3});
  PlaquetteGraph graph = build_plaquette_graph(box);
  TruncationPolicy policy;
  policy.max_total_support = static_cast<int>(state.range(0));
  policy.region = interior_region(box);
  for (auto _ : state) {
    auto vortices = enumerate_vortices(box, graph, policy);
    benchmark::DoNotOptimize(vortices.size());
  }
}
BENCHMARK(BM_VortexEnumeration)->Arg(6)->Arg(8);

void BM_PartitionStream(benchmark::State& state) {
  for (auto _ : state) {
    std::uint64_t count = 0;
    for_each_partition(static_cast<int>(state.range(0)), [&](const SetPartition&) {
      ++count;
      return true;
    });
    benchmark::DoNotOptimize(count);
  }
}
BENCHMARK(BM_PartitionStream)->Arg(10);

void BM_DoublyDecomposableSearch(benchmark::State& state) {
  for (auto _ : state) {
    Search2DReport report = min_doubly_decomposable_search(static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(report.loops_raw);
  }
}
BENCHMARK(BM_DoublyDecomposableSearch)->Arg(12)->Arg(14);

}  // namespace

BENCHMARK_MAIN();

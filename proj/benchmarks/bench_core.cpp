// Microbenchmarks for the hot paths. Costs to watch:
//   index build   ~ sum over users of |train|^2 pair updates
//   virtual user  ~ |group items| * |member profile| * |G| probability lookups
//   p-values      ~ k * (n log n) setup plus |pool| * k rank counts
// all independent of n_items^2.

#include <benchmark/benchmark.h>

#include "cgrs/conformal.hpp"
#include "cgrs/experiment.hpp"
#include "../tests/test_support.hpp"

namespace {

using namespace cgrs;

const Dataset& world() {
  static Dataset ds = split_profiles(testsup::synthetic_dataset(7, 943, 1682, 106, 1.0));
  return ds;
}

const StatIndex& world_index() {
  static StatIndex ix = StatIndex::build(world());
  return ix;
}

void BM_IndexBuild(benchmark::State& state) {
  const Dataset& ds = world();
  for (auto _ : state) {
    StatIndex ix = StatIndex::build(ds);
    benchmark::DoNotOptimize(ix.co_pair_count());
  }
}
BENCHMARK(BM_IndexBuild)->Unit(benchmark::kMillisecond);

void BM_VirtualProfile(benchmark::State& state) {
  const Dataset& ds = world();
  const StatIndex& ix = world_index();
  const std::size_t g = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Group group = form_random_group(ds, g, derive_seed(11, seed++));
    VirtualProfile vp = build_virtual_profile(ix, ds, group, 0.1, 0.25, seed);
    benchmark::DoNotOptimize(vp.weighted_items.size());
  }
}
BENCHMARK(BM_VirtualProfile)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_PoolScoring(benchmark::State& state) {
  const Dataset& ds = world();
  const StatIndex& ix = world_index();
  Group group = form_random_group(ds, 2, 5);
  VirtualProfile vp = build_virtual_profile(ix, ds, group, 0.1, 0.25, 6);
  std::vector<ItemId> pool = ds.item_universe;
  std::erase_if(pool, [&vp](ItemId i) { return vp.weighted_items.contains(i); });
  for (auto _ : state) {
    auto scores = score_pool(ix, vp.weighted_items, pool, ScoreModel::association);
    benchmark::DoNotOptimize(scores.size());
  }
}
BENCHMARK(BM_PoolScoring)->Unit(benchmark::kMillisecond);

void BM_ConformalPool(benchmark::State& state) {
  const Dataset& ds = world();
  const StatIndex& ix = world_index();
  Group group = form_random_group(ds, 2, 5);
  VirtualProfile vp = build_virtual_profile(ix, ds, group, 0.1, 0.25, 6);
  std::vector<ItemId> pool = ds.item_universe;
  std::erase_if(pool, [&group](ItemId i) {
    for (UserId u : group.members) {
      if (world().find_user(u)->in_train(i)) return true;
    }
    return false;
  });
  for (auto _ : state) {
    ConformalOutput out = recommend_cgrs(ix, vp, pool, 0.1);
    benchmark::DoNotOptimize(out.ranked.size());
  }
}
BENCHMARK(BM_ConformalPool)->Unit(benchmark::kMillisecond);

void BM_Instance(benchmark::State& state) {
  const Dataset& ds = world();
  const StatIndex& ix = world_index();
  ExperimentConfig cfg;
  cfg.dataset_label = "bench";
  cfg.group_sizes = {2};
  cfg.n_instances = 1;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    cfg.global_seed = seed++;
    RunArtifact a = run_experiment_on(cfg, ds, ix);
    benchmark::DoNotOptimize(a.instances.size());
  }
}
BENCHMARK(BM_Instance)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

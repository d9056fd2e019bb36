#include <benchmark/benchmark.h>

#include "toolgym/bench.hpp"
#include "toolgym/canonical.hpp"
#include "toolgym/inverted_index.hpp"
#include "toolgym/reward.hpp"
#include "toolgym/rng.hpp"

using namespace toolgym;

namespace {

const CacheStore& store_100k() {
  static const CacheStore store = make_synthetic_cache(100000, 1);
  return store;
}

void BM_CanonicalKey(benchmark::State& state) {
  const ToolCall call("Search_Car_Rentals", Value{{"pick_up_latitude", 32.87},
                                                  {"pick_up_longitude", -117.22},
                                                  {"pick_up_date", "2024-10-31"},
                                                  {"drop_off_date", "2024-11-01"},
                                                  {"pick_up_time", "10:00"},
                                                  {"drop_off_time", "10:00"}});
  for (auto _ : state) benchmark::DoNotOptimize(canonical_key(call));
}
BENCHMARK(BM_CanonicalKey);

void BM_Lookup100k(benchmark::State& state) {
  const CacheStore& store = store_100k();
  Rng rng(3);
  std::vector<ToolCall> probes;
  for (int i = 0; i < 4096; ++i) probes.push_back(store.entries()[rng.below(store.size())].call);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(store.lookup(probes[i++ & 4095]));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Lookup100k);

void BM_IndexQuery(benchmark::State& state) {
  const CacheStore& store = store_100k();
  const InvertedIndex index = InvertedIndex::build(store);
  Rng rng(4);
  std::vector<std::pair<std::string, std::vector<Constraint>>> queries;
  for (int i = 0; i < 1024; ++i) {
    const auto& e = store.entries()[rng.below(store.size())];
    queries.push_back({e.call.function, {{"page", e.call.args["page"]}, {"query", e.call.args["query"]}}});
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& q = queries[i++ & 1023];
    benchmark::DoNotOptimize(index.query(q.first, q.second));
  }
}
BENCHMARK(BM_IndexQuery);

void BM_RewardFiveSteps(benchmark::State& state) {
  const CacheStore& store = store_100k();
  GroundTruth gt;
  std::vector<ToolCall> pred;
  std::vector<Observation> obs;
  for (std::size_t i = 0; i < 5; ++i) {
    const auto& e = store.entries()[i * 7];
    gt.calls.push_back({static_cast<int>(i) + 1, e.call, {}});
    if (i > 0) gt.edges.emplace_back(i - 1, i);
    pred.push_back(e.call);
    obs.push_back(e.observation);
  }
  std::swap(pred[1], pred[2]);
  std::swap(obs[1], obs[2]);
  for (auto _ : state) benchmark::DoNotOptimize(score_total(pred, gt, obs).r_total);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_RewardFiveSteps);

}  // namespace
BENCHMARK_MAIN();

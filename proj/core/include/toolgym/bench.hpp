#pragma once

#include <cstddef>
#include <cstdint>

#include "toolgym/cache_store.hpp"

namespace toolgym {

struct ThroughputResult {
  std::size_t cache_entries = 0;
  std::size_t lookups = 0;
  std::size_t lookup_hits = 0;
  double lookup_seconds = 0.0;
  std::size_t reward_evals = 0;
  double reward_seconds = 0.0;
  std::uint64_t seed = 0;

  double lookups_per_sec() const noexcept { return lookup_seconds > 0 ? lookups / lookup_seconds : 0.0; }
  double reward_evals_per_sec() const noexcept { return reward_seconds > 0 ? reward_evals / reward_seconds : 0.0; }
  Value to_json() const;
};

/// `entries` distinct (call, observation) pairs over 40 synthetic functions.
CacheStore make_synthetic_cache(std::size_t entries, std::uint64_t seed);

/// Times `lookups` key lookups (about one in ten misses) and `reward_evals`
/// full score_total calls on 3-5 step workflows drawn from the store.
ThroughputResult measure_throughput(const CacheStore& store, std::uint64_t seed, std::size_t lookups,
                                    std::size_t reward_evals);

}  // namespace toolgym

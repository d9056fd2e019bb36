#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "toolgym/canonical.hpp"
#include "toolgym/tool_call.hpp"

namespace toolgym {

using EntryId = std::uint64_t;

struct CacheEntry {
  EntryId id = 0;
  CacheKey key;
  ToolCall call;
  Observation observation;
};

/// Frozen <function, args> -> observation table. Entry ids are dense and
/// equal to the entry's position.
class CacheStore {
 public:
  CacheStore() = default;

  const Observation* lookup(const CacheKey& key) const;
  const Observation* lookup(const ToolCall& call) const { return lookup(canonical_key(call)); }
  const CacheEntry* find(const CacheKey& key) const;

  const CacheEntry& entry(EntryId id) const { return entries_.at(id); }
  std::span<const CacheEntry> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  /// Ascending ids of all entries for a function.
  std::span<const EntryId> ids_for(std::string_view function) const;

  /// Snapshot: one canonical JSON line per entry, ordered by id.
  void save(std::ostream& out) const;
  void save(const std::filesystem::path& file) const;
  static CacheStore load(std::istream& in);
  static CacheStore load(const std::filesystem::path& file);

 private:
  friend class CacheBuilder;

  std::vector<CacheEntry> entries_;
  std::unordered_map<CacheKey, EntryId, CacheKeyHash> by_key_;
  std::map<std::string, std::vector<EntryId>, std::less<>> by_function_;
};

/// Single-writer builder; duplicates with identical observations collapse,
/// inconsistent duplicates throw ConflictError.
class CacheBuilder {
 public:
  CacheBuilder() = default;
  /// Continue from an existing store; ids of its entries are preserved.
  explicit CacheBuilder(CacheStore base) : store_(std::move(base)) {}

  /// Returns the id of the (possibly pre-existing) entry. Throws
  /// std::invalid_argument for error observations.
  EntryId add(ToolCall call, Observation observation);

  const Observation* lookup(const ToolCall& call) const { return store_.lookup(call); }
  std::size_t size() const noexcept { return store_.size(); }

  CacheStore freeze() && { return std::move(store_); }

 private:
  CacheStore store_;
};

/// Builds a store from (call, observation) pairs.
template <typename Range>
CacheStore build_cache(Range&& entries) {
  CacheBuilder b;
  for (auto&& [call, obs] : entries) b.add(call, obs);
  return std::move(b).freeze();
}

}  // namespace toolgym

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "toolgym/cache_store.hpp"

namespace toolgym {

/// (parameter name, required value)
using Constraint = std::pair<std::string, Value>;

/// Three-level map function -> parameter -> canonical value -> sorted ids.
class InvertedIndex {
 public:
  static InvertedIndex build(const CacheStore& store);

  /// Posting list, or an empty span when the triple was never seen.
  std::span<const EntryId> postings(std::string_view function, std::string_view param, const Value& value) const;

  /// Ascending ids of entries for `function` satisfying every constraint;
  /// all entries for the function when constraints are empty.
  std::vector<EntryId> query(std::string_view function, std::span<const Constraint> constraints) const;

  std::size_t posting_count() const noexcept { return posting_count_; }
  bool empty() const noexcept { return posting_count_ == 0; }

 private:
  using ValueLevel = std::unordered_map<std::string, std::vector<EntryId>>;
  using ParamLevel = std::unordered_map<std::string, ValueLevel>;

  std::unordered_map<std::string, ParamLevel> postings_;
  std::unordered_map<std::string, std::vector<EntryId>> all_;
  std::size_t posting_count_ = 0;
};

}  // namespace toolgym

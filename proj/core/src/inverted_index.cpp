#include "toolgym/inverted_index.hpp"

#include <algorithm>
#include <iterator>

namespace toolgym {

InvertedIndex InvertedIndex::build(const CacheStore& store) {
  InvertedIndex idx;
  // Entries are visited in id order, so every posting list stays sorted.
  for (const auto& e : store.entries()) {
    idx.all_[e.call.function].push_back(e.id);
    auto& params = idx.postings_[e.call.function];
    for (auto it = e.call.args.begin(); it != e.call.args.end(); ++it) {
      params[it.key()][canonical_string(it.value())].push_back(e.id);
      ++idx.posting_count_;
    }
  }
  return idx;
}

std::span<const EntryId> InvertedIndex::postings(std::string_view function, std::string_view param,
                                                 const Value& value) const {
  auto f = postings_.find(std::string(function));
  if (f == postings_.end()) return {};
  auto p = f->second.find(std::string(param));
  if (p == f->second.end()) return {};
  auto v = p->second.find(canonical_string(value));
  if (v == p->second.end()) return {};
  return v->second;
}

std::vector<EntryId> InvertedIndex::query(std::string_view function, std::span<const Constraint> constraints) const {
  if (constraints.empty()) {
    auto it = all_.find(std::string(function));
    return it == all_.end() ? std::vector<EntryId>{} : it->second;
  }
  std::vector<std::span<const EntryId>> lists;
  lists.reserve(constraints.size());
  for (const auto& [param, value] : constraints) {
    auto list = postings(function, param, value);
    if (list.empty()) return {};
    lists.push_back(list);
  }
  std::sort(lists.begin(), lists.end(), [](auto a, auto b) { return a.size() < b.size(); });
  std::vector<EntryId> result(lists.front().begin(), lists.front().end());
  std::vector<EntryId> scratch;
  for (std::size_t i = 1; i < lists.size() && !result.empty(); ++i) {
    scratch.clear();
    std::set_intersection(result.begin(), result.end(), lists[i].begin(), lists[i].end(),
                          std::back_inserter(scratch));
    result.swap(scratch);
  }
  return result;
}

}  // namespace toolgym

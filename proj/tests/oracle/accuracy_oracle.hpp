#pragma once

// Turn and call accuracy by direct counting: a turn succeeds when the
// multiset of its ground-truth calls is contained in the predicted turn.

#include <string>
#include <utility>
#include <vector>

#include "strict_value.hpp"

namespace oracle {

using CallList = std::vector<std::pair<std::string, json>>;

inline bool same_call(const std::pair<std::string, json>& a, const std::pair<std::string, json>& b) {
  return a.first == b.first && strict_equal(a.second, b.second);
}

inline std::size_t count_in(const CallList& xs, const std::pair<std::string, json>& c) {
  std::size_t n = 0;
  for (const auto& x : xs) n += same_call(x, c);
  return n;
}

inline std::pair<std::size_t, std::size_t> turn_prefix(const std::vector<CallList>& pred, const std::vector<CallList>& gt) {
  std::size_t ok = 0;
  for (std::size_t t = 0; t < gt.size(); ++t) {
    if (t >= pred.size()) break;
    bool all = true;
    for (const auto& c : gt[t]) all = all && count_in(pred[t], c) >= count_in(gt[t], c);
    if (!all) break;
    ++ok;
  }
  return {ok, gt.size()};
}

// Matched calls: for each distinct gt call, min(predicted copies, gt copies).
inline std::pair<std::size_t, std::size_t> call_matches(const CallList& pred, const CallList& gt) {
  std::size_t matched = 0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    bool first = true;
    for (std::size_t j = 0; j < i; ++j) first = first && !same_call(gt[j], gt[i]);
    if (!first) continue;
    const std::size_t want = count_in(gt, gt[i]);
    const std::size_t have = count_in(pred, gt[i]);
    matched += want < have ? want : have;
  }
  return {matched, gt.size()};
}

}  // namespace oracle

#pragma once

// Seeded random ground truths with multi-call turns and predicted turn lists
// derived from them, for evaluator identity checks.

#include <random>

#include "accuracy_oracle.hpp"
#include "random_pairs.hpp"

namespace testing_support {

struct RandomEpisode {
  toolgym::DatasetSample sample;
  std::vector<std::vector<toolgym::ToolCall>> pred_turns;
};

inline RandomEpisode random_episode(std::mt19937_64& rng, int id) {
  RandomEpisode e;
  e.sample.id = "r" + std::to_string(id);
  auto& gt = e.sample.ground_truth;
  const int turns = 1 + static_cast<int>(rng() % 4);
  for (int t = 1; t <= turns; ++t) {
    const int width = 1 + static_cast<int>(rng() % 3);
    for (int w = 0; w < width; ++w) {
      toolgym::GroundTruth::Call c;
      c.turn = t;
      c.call = toolgym::ToolCall("Fn_" + std::to_string(rng() % 4), random_args(rng));
      for (std::size_t j = 0; j < gt.calls.size(); ++j) {
        if (gt.calls[j].turn < t && rng() % 3 == 0) {
          gt.edges.emplace_back(j, gt.calls.size());
          if (!c.call.args.empty()) c.dependency_params.push_back(c.call.args.begin().key());
        }
      }
      gt.calls.push_back(std::move(c));
    }
  }
  for (const auto& idx : gt.turns()) {
    if (rng() % 7 == 0) break;  // stops early
    std::vector<toolgym::ToolCall> turn;
    for (auto i : idx) {
      const auto roll = rng() % 8;
      if (roll == 0) continue;
      if (roll == 1) turn.emplace_back(gt.calls[i].call.function, perturb(gt.calls[i].call.args, rng));
      else if (roll == 2) turn.emplace_back("Fn_9", gt.calls[i].call.args);
      else turn.push_back(gt.calls[i].call);
    }
    if (rng() % 6 == 0) turn.emplace_back("Fn_" + std::to_string(rng() % 5), random_args(rng));
    if (turn.size() > 1 && rng() % 2) std::swap(turn.front(), turn.back());
    e.pred_turns.push_back(std::move(turn));
  }
  return e;
}

inline oracle::CallList to_oracle(const std::vector<toolgym::ToolCall>& calls) {
  oracle::CallList out;
  for (const auto& c : calls) out.emplace_back(c.function, c.args);
  return out;
}

}  // namespace testing_support

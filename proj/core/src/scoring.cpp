#include "toolgym/scoring.hpp"

#include <unordered_map>

#include "toolgym/errors.hpp"

namespace toolgym {

namespace {

Value ratio_json(const Ratio& r) { return Value{{"num", r.num}, {"den", r.den}, {"value", r.value()}}; }

}  // namespace

Value ScoreSummary::to_json() const {
  Value per = Value::array();
  for (const auto& s : samples) {
    per.push_back(Value{{"sample_id", s.sample_id},
                        {"reward", s.reward.to_json()},
                        {"turn_acc", ratio_json(s.turns)},
                        {"call_acc", ratio_json(s.calls)}});
  }
  return Value{{"samples", std::move(per)},
               {"count", samples.size()},
               {"missing", missing},
               {"lambda", lambda},
               {"mean", {{"r_atomic", mean_atomic}, {"r_orch", mean_orch}, {"r_total", mean_total}}}};
}

std::vector<std::pair<const DatasetSample*, const Prediction*>> pair_predictions(
    std::span<const DatasetSample> dataset, std::span<const Prediction> predictions) {
  std::unordered_map<std::string, const Prediction*> by_id;
  for (const auto& p : predictions) {
    if (!by_id.emplace(p.sample_id, &p).second) throw SchemaError("sample '" + p.sample_id + "' predicted twice");
  }
  std::vector<std::pair<const DatasetSample*, const Prediction*>> out;
  std::size_t used = 0;
  for (const auto& s : dataset) {
    auto it = by_id.find(s.id);
    const Prediction* p = it == by_id.end() ? nullptr : it->second;
    used += p != nullptr;
    out.emplace_back(&s, p);
  }
  if (used != by_id.size()) {
    std::unordered_map<std::string, bool> known;
    for (const auto& s : dataset) known[s.id] = true;
    for (const auto& p : predictions) {
      if (!known.count(p.sample_id)) throw SchemaError("prediction for unknown sample '" + p.sample_id + "'");
    }
  }
  return out;
}

ScoreSummary score_predictions(std::span<const DatasetSample> dataset, std::span<const Prediction> predictions,
                               const Environment* env, double lambda, int max_turns) {
  ScoreSummary summary;
  summary.lambda = lambda;
  const Registry* registry = env ? &env->registry() : nullptr;
  for (const auto& [sample, pred] : pair_predictions(dataset, predictions)) {
    ResolvedTranscript t;
    if (pred != nullptr) {
      t = resolve_prediction(*pred, *sample, env, max_turns);
    } else {
      summary.missing.push_back(sample->id);
    }
    ScoredSample s;
    s.sample_id = sample->id;
    s.reward = score_total(t.calls, sample->ground_truth, t.observations, lambda, registry);
    s.turns = turn_accuracy(t.turns, sample->ground_truth);
    s.calls = call_accuracy(t.calls, sample->ground_truth);
    summary.mean_atomic += s.reward.r_atomic;
    summary.mean_orch += s.reward.r_orch;
    summary.mean_total += s.reward.r_total;
    summary.samples.push_back(std::move(s));
  }
  if (!summary.samples.empty()) {
    const auto n = static_cast<double>(summary.samples.size());
    summary.mean_atomic /= n;
    summary.mean_orch /= n;
    summary.mean_total /= n;
  }
  return summary;
}

EvalReport evaluate_predictions(std::span<const DatasetSample> dataset, std::span<const Prediction> predictions,
                                const Environment* env, int max_turns) {
  Evaluator ev;
  for (const auto& [sample, pred] : pair_predictions(dataset, predictions)) {
    std::vector<std::vector<ToolCall>> turns;
    if (pred != nullptr) {
      // Turn grouping only; observations are not needed for accuracy.
      if (pred->messages.empty()) {
        turns = pred->turns;
      } else {
        turns = resolve_prediction(*pred, *sample, env, max_turns).turns;
      }
    }
    ev.add(*sample, turns);
  }
  return ev.report();
}

}  // namespace toolgym

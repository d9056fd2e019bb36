#pragma once

#include <span>
#include <string>
#include <vector>

#include "toolgym/evaluator.hpp"
#include "toolgym/predictions.hpp"
#include "toolgym/reward.hpp"

namespace toolgym {

struct ScoredSample {
  std::string sample_id;
  RewardReport reward;
  Ratio turns;
  Ratio calls;
};

/// Per-sample reward reports plus their means. Samples without a prediction
/// are scored as empty transcripts and listed in `missing`.
struct ScoreSummary {
  std::vector<ScoredSample> samples;
  std::vector<std::string> missing;
  double mean_atomic = 0.0;
  double mean_orch = 0.0;
  double mean_total = 0.0;
  double lambda = kDefaultLambda;

  Value to_json() const;
};

/// Pairs predictions with dataset samples by id. Throws SchemaError for a
/// prediction naming an unknown sample or a sample predicted twice.
std::vector<std::pair<const DatasetSample*, const Prediction*>> pair_predictions(
    std::span<const DatasetSample> dataset, std::span<const Prediction> predictions);

ScoreSummary score_predictions(std::span<const DatasetSample> dataset, std::span<const Prediction> predictions,
                               const Environment* env, double lambda = kDefaultLambda,
                               int max_turns = kDefaultMaxTurns);

EvalReport evaluate_predictions(std::span<const DatasetSample> dataset, std::span<const Prediction> predictions,
                                const Environment* env, int max_turns = kDefaultMaxTurns);

}  // namespace toolgym

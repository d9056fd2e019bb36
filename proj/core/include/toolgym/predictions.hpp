#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "toolgym/dataset.hpp"
#include "toolgym/environment.hpp"
#include "toolgym/episode.hpp"

namespace toolgym {

/// One predicted transcript, keyed by sample id. Either `turns` (call groups
/// per assistant message) or `messages` (raw assistant texts) is set.
/// Observations are optional; missing ones are produced by the environment.
struct Prediction {
  std::string sample_id;
  std::vector<std::vector<ToolCall>> turns;
  std::vector<std::string> messages;
  std::optional<std::vector<Observation>> observations;

  Value to_json() const;
  static Prediction from_json(const Value& doc);
};

/// One prediction per line; lines holding a ComplexFuncBench record
/// ({"conversations": ...}) are converted with cfb_to_prediction.
std::vector<Prediction> read_predictions(std::istream& in);
std::vector<Prediction> load_predictions(const std::filesystem::path& file);
void write_predictions(std::ostream& out, const std::vector<Prediction>& predictions);

/// A prediction resolved into calls, turns and the observations they got.
struct ResolvedTranscript {
  std::vector<std::vector<ToolCall>> turns;
  std::vector<ToolCall> calls;
  std::vector<Observation> observations;
};

/// Raw messages are rolled out through an Episode; call groups are executed
/// one by one unless observations were supplied. With env == nullptr and no
/// observations, the observation list stays empty.
ResolvedTranscript resolve_prediction(const Prediction& p, const DatasetSample& sample, const Environment* env,
                                      int max_turns = kDefaultMaxTurns);

/// Converts a finished episode into a prediction record.
Prediction prediction_from_episode(const Episode& episode);

}  // namespace toolgym

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "toolgym/dataset.hpp"
#include "toolgym/environment.hpp"

namespace toolgym {

inline constexpr int kDefaultMaxTurns = 10;

struct TranscriptEntry {
  int turn = 0;  // 1-based assistant message that issued the call
  ToolCall call;
  Observation observation;
};

struct StepResult {
  std::string responses_text;
  std::vector<ToolCall> calls;
  bool done = false;
  std::optional<std::string> parse_error;
};

/// One rollout against a shared environment. Not thread-safe; each episode
/// belongs to a single session.
class Episode {
 public:
  Episode(const Environment& env, DatasetSample sample, int max_turns = kDefaultMaxTurns);

  /// Parses the assistant message, executes its calls in order and renders
  /// one <tool_response> per call. A message without calls ends the episode,
  /// as does reaching max_turns. Throws std::logic_error once closed.
  StepResult step(std::string_view assistant_text);

  const DatasetSample& sample() const noexcept { return sample_; }
  const std::vector<TranscriptEntry>& transcript() const noexcept { return transcript_; }
  int turn_count() const noexcept { return turn_count_; }
  bool closed() const noexcept { return closed_; }

  std::vector<ToolCall> predicted_calls() const;
  std::vector<Observation> observations() const;
  /// Calls grouped per assistant message, including empty groups for
  /// messages whose calls failed to parse.
  std::vector<std::vector<ToolCall>> predicted_turns() const;

 private:
  const Environment* env_;
  DatasetSample sample_;
  int max_turns_;
  std::vector<TranscriptEntry> transcript_;
  int turn_count_ = 0;
  int call_turns_ = 0;  // turns up to and including the last one that issued calls or failed to parse
  bool closed_ = false;
};

}  // namespace toolgym

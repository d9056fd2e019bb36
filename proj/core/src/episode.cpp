#include "toolgym/episode.hpp"

#include <stdexcept>

#include "toolgym/errors.hpp"
#include "toolgym/protocol.hpp"

namespace toolgym {

Episode::Episode(const Environment& env, DatasetSample sample, int max_turns)
    : env_(&env), sample_(std::move(sample)), max_turns_(max_turns) {
  if (max_turns_ < 1) throw std::invalid_argument("max_turns must be positive");
}

StepResult Episode::step(std::string_view assistant_text) {
  if (closed_) throw std::logic_error("episode is closed");
  StepResult result;
  ++turn_count_;
  try {
    result.calls = parse_tool_calls(assistant_text);
  } catch (const ParseError& e) {
    call_turns_ = turn_count_;
    result.parse_error = e.what();
    result.responses_text = render_parse_error(e.what());
    if (turn_count_ >= max_turns_) closed_ = result.done = true;
    return result;
  }
  if (result.calls.empty()) {
    closed_ = result.done = true;
    return result;
  }
  call_turns_ = turn_count_;
  for (const auto& call : result.calls) {
    Observation obs = env_->execute(call);
    if (!result.responses_text.empty()) result.responses_text += '\n';
    result.responses_text += render_tool_response(obs);
    transcript_.push_back(TranscriptEntry{turn_count_, call, std::move(obs)});
  }
  if (turn_count_ >= max_turns_) closed_ = result.done = true;
  return result;
}

std::vector<ToolCall> Episode::predicted_calls() const {
  std::vector<ToolCall> out;
  out.reserve(transcript_.size());
  for (const auto& e : transcript_) out.push_back(e.call);
  return out;
}

std::vector<Observation> Episode::observations() const {
  std::vector<Observation> out;
  out.reserve(transcript_.size());
  for (const auto& e : transcript_) out.push_back(e.observation);
  return out;
}

std::vector<std::vector<ToolCall>> Episode::predicted_turns() const {
  std::vector<std::vector<ToolCall>> out(static_cast<std::size_t>(call_turns_));
  for (const auto& e : transcript_) out[static_cast<std::size_t>(e.turn - 1)].push_back(e.call);
  return out;
}

}  // namespace toolgym

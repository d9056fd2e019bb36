#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "toolgym/cache_store.hpp"
#include "toolgym/schema.hpp"
#include "toolgym/tool_call.hpp"

namespace toolgym {

struct TraceStep {
  ToolCall call;
  Observation observation;
  EntryId entry = 0;
  /// Parameters bound from an earlier step's observation.
  std::set<std::string> dependency_params;
};

/// A sampled action/observation sequence following one template.
struct Trace {
  std::vector<TraceStep> steps;
  std::string template_id;
  std::vector<std::string> pattern;
  std::uint64_t seed = 0;
};

/// Query plus the generator's restatement of the parameters it used.
struct QueryDraft {
  std::string query;
  std::vector<Value> chosen_parameters;  // one argument map per step
  std::string variation_notes;

  Value to_json() const;
  /// Throws GeneratorError when the document lacks the required fields.
  static QueryDraft from_json(const Value& doc);
};

struct QueryPrompt {
  std::string system;
  std::string user;
};

/// System message of the query-generation prompt.
extern const char* const kQueryGenerationSystemPrompt;

/// Builds the query-generation prompt listing every step's exact parameters;
/// dependency-bound parameters are marked as coming from earlier results.
QueryPrompt build_query_prompt(const Trace& trace);

class Generator {
 public:
  virtual ~Generator() = default;
  virtual QueryDraft generate(const Trace& trace, const QueryPrompt& prompt) = 0;
  virtual std::string id() const = 0;
};

/// Deterministic template-stitched English; echoes every query-derived
/// parameter verbatim.
class FallbackGenerator final : public Generator {
 public:
  explicit FallbackGenerator(const Registry* registry = nullptr) : registry_(registry) {}
  QueryDraft generate(const Trace& trace, const QueryPrompt& prompt) override;
  std::string id() const override { return "fallback"; }

 private:
  const Registry* registry_;
};

/// Runs an external command per trace. The request document
/// {"system", "user", "trace"} is written to the command's standard input;
/// its standard output must be the draft JSON.
class ExecGenerator final : public Generator {
 public:
  explicit ExecGenerator(std::string command) : command_(std::move(command)) {}
  QueryDraft generate(const Trace& trace, const QueryPrompt& prompt) override;
  std::string id() const override { return "exec:" + command_; }

 private:
  std::string command_;
};

/// Invokes the generator on the trace's prompt; GeneratorError propagates.
QueryDraft generate_query(const Trace& trace, Generator& generator);

/// True iff every parameter not bound by a dependency appears, canonically
/// equal, in chosen_parameters at its step.
bool verify_echo_back(const QueryDraft& draft, const Trace& trace);

}  // namespace toolgym

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "toolgym/dataset.hpp"
#include "toolgym/environment.hpp"
#include "toolgym/generator.hpp"
#include "toolgym/inverted_index.hpp"
#include "toolgym/rng.hpp"
#include "toolgym/workflow_template.hpp"

namespace toolgym {

inline constexpr int kDefaultMaxRestarts = 10;
inline constexpr int kDefaultAttemptsPerSlot = 5;

struct SampleOutcome {
  std::optional<Trace> trace;  // empty when exhausted
  int restarts = 0;

  bool exhausted() const noexcept { return !trace.has_value(); }
};

/// Samples one trace step by step. Independent steps draw uniformly from
/// every entry of their function; dependent steps extract the bound values
/// from earlier observations and draw from the index intersection. An empty
/// candidate set restarts from the first step; after max_restarts restarts
/// the outcome is exhausted. Throws ClosureError when a bound path does not
/// resolve on a sampled observation.
SampleOutcome sample_trace(const WorkflowTemplate& tmpl, const CacheStore& store, const InvertedIndex& index,
                           Rng& rng, int max_restarts = kDefaultMaxRestarts);

/// Independent re-check of a trace: every dependency-bound argument equals
/// the value extracted from its source observation.
bool trace_bindings_hold(const Trace& trace, const WorkflowTemplate& tmpl);

/// Executes every ground-truth call; true when none fails and (when given)
/// each observation equals the expected one.
bool replays_cleanly(const GroundTruth& gt, const Environment& env);

struct TemplateSynthesisStats {
  std::size_t slots = 0;
  std::size_t accepted = 0;
  std::size_t attempts = 0;
  std::map<std::string, std::size_t> failures;  // cause -> count
};

struct SynthesisReport {
  std::map<std::string, TemplateSynthesisStats> templates;

  std::size_t slots() const noexcept;
  std::size_t accepted() const noexcept;
  double yield() const noexcept;
  Value to_json() const;
};

struct SynthesisOptions {
  int per_template = 3;
  std::uint64_t seed = 0;
  int max_restarts = kDefaultMaxRestarts;
  int attempts_per_slot = kDefaultAttemptsPerSlot;
};

struct SynthesisResult {
  std::vector<DatasetSample> samples;
  SynthesisReport report;
};

/// Sample, generate a query, verify the echo-back, then replay the ground
/// truth through the environment; only samples passing all checks are kept.
SynthesisResult synthesize_dataset(std::span<const WorkflowTemplate> templates, const Environment& env,
                                   const InvertedIndex& index, Generator& generator, const SynthesisOptions& options);

}  // namespace toolgym

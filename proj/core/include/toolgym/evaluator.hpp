#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "toolgym/dataset.hpp"

namespace toolgym {

/// Strict match: same function name (case-sensitive) and canonically equal arguments.
bool match_call(const ToolCall& pred, const ToolCall& gt);

struct Ratio {
  std::size_t num = 0;
  std::size_t den = 0;

  double value() const noexcept { return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den); }
  Ratio& operator+=(const Ratio& o) noexcept {
    num += o.num;
    den += o.den;
    return *this;
  }
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

/// Consecutive successful turns from the start. Predicted turn t is compared
/// with ground-truth turn t; order inside a turn does not matter.
Ratio turn_accuracy(std::span<const std::vector<ToolCall>> pred_turns, const GroundTruth& gt);

/// Greedy in-order matching of predicted calls against unused ground-truth calls.
Ratio call_accuracy(std::span<const ToolCall> pred, const GroundTruth& gt);

enum class DependencyPattern { kLinear, kFanOut };
std::string_view to_string(DependencyPattern p) noexcept;

struct Stratum {
  int depth = 0;  // longest dependency chain, in edges
  DependencyPattern pattern = DependencyPattern::kLinear;
  std::string logic;  // empty when unknown
};

Stratum stratify(std::size_t node_count, std::span<const Edge> edges, std::string_view logic = {});
Stratum stratify(const DatasetSample& sample);

/// Raw per-sample error tallies; merged by addition.
struct ErrorCounts {
  std::size_t produced_calls = 0;
  std::size_t function_selection_err = 0;
  std::size_t parameter_err = 0;
  std::size_t correct_function_calls = 0;
  std::size_t query_param_err = 0;
  std::size_t dependency_param_err = 0;
  std::size_t samples = 0;
  std::size_t incomplete = 0;
  std::size_t stopped_after_correct = 0;
  std::size_t stopped_after_func_err = 0;
  std::size_t stopped_after_param_err = 0;
  std::size_t stopped_without_calls = 0;

  ErrorCounts& operator+=(const ErrorCounts& o) noexcept;
};

struct ErrorBreakdown {
  double function_selection_err = 0;  // over produced calls
  double parameter_err = 0;           // over produced calls
  double query_param_err = 0;         // over calls with a correct function
  double dependency_param_err = 0;    // over calls with a correct function
  double stopped_after_correct = 0;   // over samples
  double stopped_after_func_err = 0;
  double stopped_after_param_err = 0;
  double stopped_without_calls = 0;

  static ErrorBreakdown from_counts(const ErrorCounts& c) noexcept;
  Value to_json() const;
};

/// Three-level error taxonomy for one sample. A predicted call is a function
/// selection error when its name is absent from y*; otherwise it is compared
/// with its aligned ground-truth call (or the first one of that name).
ErrorCounts classify_errors(std::span<const std::vector<ToolCall>> pred_turns, const GroundTruth& gt);

struct StratumStats {
  std::size_t count = 0;
  Ratio turns;
};

struct EvalReport {
  std::size_t samples = 0;
  Ratio turns;
  Ratio calls;
  std::map<std::string, StratumStats> strata;
  ErrorCounts error_counts;

  double turn_acc() const noexcept { return turns.value(); }
  double call_acc() const noexcept { return calls.value(); }
  ErrorBreakdown errors() const noexcept { return ErrorBreakdown::from_counts(error_counts); }

  Value to_json() const;
  /// Plain-text summary with accuracy, strata and error tables.
  std::string table() const;
};

/// Accumulates samples into an EvalReport; aggregates are ratios of sums.
class Evaluator {
 public:
  void add(const DatasetSample& sample, std::span<const std::vector<ToolCall>> pred_turns);
  const EvalReport& report() const noexcept { return report_; }

 private:
  EvalReport report_;
};

}  // namespace toolgym

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "toolgym/tool_call.hpp"
#include "toolgym/workflow_template.hpp"

namespace toolgym {

/// Ground-truth workflow y*: calls grouped into consecutive turns, plus the
/// dependency graph between them.
struct GroundTruth {
  struct Call {
    int turn = 1;  // 1-based
    ToolCall call;
    /// Parameters whose values come from an earlier observation.
    std::vector<std::string> dependency_params;
  };

  std::vector<Call> calls;
  std::string template_id;
  std::optional<std::vector<Observation>> expected_observations;
  /// (prerequisite call index, dependent call index)
  std::vector<Edge> edges;

  /// Throws SchemaError when turn indices are not a contiguous 1..N range or
  /// an edge is out of range / not forward in turn order.
  void validate() const;

  int num_turns() const noexcept;
  /// Call indices of each turn, turns in order, calls in list order.
  std::vector<std::vector<std::size_t>> turns() const;
  std::vector<ToolCall> tool_calls() const;
  bool is_dependency_param(std::size_t call, std::string_view param) const;

  Value to_json() const;
  static GroundTruth from_json(const Value& doc);

  /// Builds y* from template-ordered calls; turns follow turn_levels().
  static GroundTruth from_template(const WorkflowTemplate& t, std::vector<ToolCall> calls,
                                   std::optional<std::vector<Observation>> observations = std::nullopt);
};

struct Provenance {
  std::string template_id;
  std::uint64_t seed = 0;
  std::string generator_id;
  std::string logic;  // composition label when known
  std::string domain;
};

struct DatasetSample {
  std::string id;
  std::string query;
  GroundTruth ground_truth;
  Provenance provenance;

  Value to_json() const;
  static DatasetSample from_json(const Value& doc);
};

/// Line-delimited dataset file: one canonical JSON sample per line.
void write_dataset(std::ostream& out, const std::vector<DatasetSample>& samples);
std::vector<DatasetSample> read_dataset(std::istream& in);
std::vector<DatasetSample> load_dataset(const std::filesystem::path& file);

}  // namespace toolgym

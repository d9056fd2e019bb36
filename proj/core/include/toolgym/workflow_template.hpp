#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "toolgym/path_expr.hpp"
#include "toolgym/value.hpp"

namespace toolgym {

using Edge = std::pair<std::size_t, std::size_t>;  // (prerequisite step, dependent step)

struct DependencyArg {
  std::size_t from_step = 0;
  PathExpr from_field;

  friend bool operator==(const DependencyArg&, const DependencyArg&) = default;
};

struct StepDependencies {
  std::vector<std::size_t> depends_on;
  std::map<std::string, DependencyArg> args;  // parameter name -> source

  friend bool operator==(const StepDependencies&, const StepDependencies&) = default;
};

/// An ordered function pattern with forward-only dependency bindings.
struct WorkflowTemplate {
  std::string id;
  std::vector<std::string> pattern;
  std::map<std::size_t, StepDependencies> dependencies;
  std::string logic;   // optional composition label, e.g. "parallel_conjunction"
  std::string domain;  // optional

  std::size_t size() const noexcept { return pattern.size(); }
  std::vector<Edge> edges() const;
  /// Dependency bindings of a step; empty when the step is independent.
  const StepDependencies& step(std::size_t i) const;
  bool is_dependency_arg(std::size_t step, std::string_view param) const;

  friend bool operator==(const WorkflowTemplate&, const WorkflowTemplate&) = default;
};

/// Parses one template document. Throws SchemaError, CycleError or PathSyntaxError.
WorkflowTemplate parse_template(std::string_view doc, std::string id = {});
WorkflowTemplate template_from_json(const Value& doc, std::string id = {});
Value template_to_json(const WorkflowTemplate& t);
std::string serialize_template(const WorkflowTemplate& t);

/// Loads every *.json file in a directory, sorted by filename. The id
/// defaults to the file stem when the document has none.
std::vector<WorkflowTemplate> load_templates(const std::filesystem::path& dir);

/// Parallel grouping: turn of each step (1-based), equal to one plus the
/// longest dependency chain ending at it.
std::vector<int> turn_levels(const WorkflowTemplate& t);

/// Kahn's algorithm over edges; returns false on a cycle.
bool topological_order(std::size_t n, const std::vector<Edge>& edges, std::vector<std::size_t>* order = nullptr);

}  // namespace toolgym

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "toolgym/tool_call.hpp"
#include "toolgym/value.hpp"

namespace toolgym {

/// One step of a field path: a map field or a list index.
struct PathSegment {
  enum class Kind { kField, kIndex };

  Kind kind = Kind::kField;
  std::string field;
  std::size_t index = 0;

  static PathSegment Field(std::string name) { return {Kind::kField, std::move(name), 0}; }
  static PathSegment Index(std::size_t n) { return {Kind::kIndex, {}, n}; }

  friend bool operator==(const PathSegment&, const PathSegment&) = default;
};

/// A parsed `from_field` expression such as `search_results[0].vehicle_id`.
///
/// Grammar:
///   path  := seg ( '.' field | index )*
///   seg   := field | index
///   field := [A-Za-z_][A-Za-z0-9_]*
///   index := '[' digits ']'
/// A leading index addresses a list-rooted observation.
class PathExpr {
 public:
  PathExpr() = default;
  /// Throws SchemaError if segments are empty or a field name is empty.
  explicit PathExpr(std::vector<PathSegment> segments);

  const std::vector<PathSegment>& segments() const noexcept { return segments_; }
  bool empty() const noexcept { return segments_.empty(); }

  friend bool operator==(const PathExpr&, const PathExpr&) = default;

 private:
  std::vector<PathSegment> segments_;
};

/// Throws PathSyntaxError carrying the byte offset of the first bad token.
PathExpr parse_path(std::string_view src);

/// Canonical string form; parse_path(render(p)) == p.
std::string render(const PathExpr& path);

/// Navigates a value. Throws PathNotFound with the failing segment index.
const Value& extract(const PathExpr& path, const Value& root);

/// Precondition: obs is not an error (throws std::invalid_argument otherwise).
const Value& extract(const PathExpr& path, const Observation& obs);

}  // namespace toolgym

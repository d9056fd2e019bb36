#include "toolgym/path_expr.hpp"

#include <cctype>
#include <stdexcept>

#include "toolgym/errors.hpp"

namespace toolgym {
namespace {

bool is_field_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_field_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class PathParser {
 public:
  explicit PathParser(std::string_view src) : src_(src) {}

  PathExpr parse() {
    if (src_.empty()) throw PathSyntaxError(0, "empty path");
    std::vector<PathSegment> segs;
    if (peek() == '[') {
      segs.push_back(parse_index());
    } else {
      segs.push_back(parse_field());
    }
    while (pos_ < src_.size()) {
      if (peek() == '.') {
        ++pos_;
        segs.push_back(parse_field());
      } else if (peek() == '[') {
        segs.push_back(parse_index());
      } else {
        throw PathSyntaxError(pos_, std::string("unexpected character '") + peek() + "'");
      }
    }
    return PathExpr(std::move(segs));
  }

 private:
  char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }

  PathSegment parse_field() {
    if (pos_ >= src_.size()) throw PathSyntaxError(pos_, "expected a field name, found end of input");
    if (!is_field_start(src_[pos_])) {
      throw PathSyntaxError(pos_, std::string("expected a field name, found '") + src_[pos_] + "'");
    }
    const std::size_t start = pos_;
    while (pos_ < src_.size() && is_field_char(src_[pos_])) ++pos_;
    return PathSegment::Field(std::string(src_.substr(start, pos_ - start)));
  }

  PathSegment parse_index() {
    ++pos_;  // '['
    const std::size_t start = pos_;
    std::size_t value = 0;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      if (pos_ - start >= 18) throw PathSyntaxError(pos_, "index too large");
      value = value * 10 + static_cast<std::size_t>(src_[pos_] - '0');
      ++pos_;
    }
    if (pos_ == start) {
      if (pos_ >= src_.size()) throw PathSyntaxError(pos_, "expected digits, found end of input");
      throw PathSyntaxError(pos_, std::string("expected digits, found '") + src_[pos_] + "'");
    }
    if (pos_ >= src_.size() || src_[pos_] != ']') throw PathSyntaxError(pos_, "expected ']'");
    ++pos_;
    return PathSegment::Index(value);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

PathExpr::PathExpr(std::vector<PathSegment> segments) : segments_(std::move(segments)) {
  if (segments_.empty()) throw SchemaError("path must have at least one segment");
  for (const auto& s : segments_) {
    if (s.kind == PathSegment::Kind::kField && s.field.empty()) throw SchemaError("empty field name in path");
  }
}

PathExpr parse_path(std::string_view src) { return PathParser(src).parse(); }

std::string render(const PathExpr& path) {
  std::string out;
  bool first = true;
  for (const auto& s : path.segments()) {
    if (s.kind == PathSegment::Kind::kIndex) {
      out += '[';
      out += std::to_string(s.index);
      out += ']';
    } else {
      if (!first) out += '.';
      out += s.field;
    }
    first = false;
  }
  return out;
}

const Value& extract(const PathExpr& path, const Value& root) {
  const Value* node = &root;
  const auto& segs = path.segments();
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const auto& s = segs[i];
    if (s.kind == PathSegment::Kind::kField) {
      if (!node->is_object()) throw PathNotFound(i, "field '" + s.field + "' applied to a non-map node");
      auto it = node->find(s.field);
      if (it == node->end()) throw PathNotFound(i, "no field '" + s.field + "'");
      node = &*it;
    } else {
      if (!node->is_array()) throw PathNotFound(i, "index applied to a non-list node");
      if (s.index >= node->size()) {
        throw PathNotFound(i, "index " + std::to_string(s.index) + " out of bounds (size " +
                                  std::to_string(node->size()) + ")");
      }
      node = &(*node)[s.index];
    }
  }
  return *node;
}

const Value& extract(const PathExpr& path, const Observation& obs) {
  if (obs.is_error()) throw std::invalid_argument("extract called on an error observation");
  return extract(path, obs.payload());
}

}  // namespace toolgym

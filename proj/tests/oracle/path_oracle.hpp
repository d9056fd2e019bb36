#pragma once

// Minimal independent reader for from_field strings ("a.b[0].c", "[0].x"),
// used to re-check dependency bindings. Returns nullopt when the path does
// not resolve.

#include <cctype>
#include <optional>
#include <string>

#include "strict_value.hpp"

namespace oracle {

inline std::optional<json> follow(const json& root, const std::string& path) {
  const json* node = &root;
  std::size_t i = 0;
  while (i < path.size()) {
    if (path[i] == '.') ++i;
    if (i < path.size() && path[i] == '[') {
      const std::size_t close = path.find(']', i);
      if (close == std::string::npos) return std::nullopt;
      const std::size_t idx = std::stoul(path.substr(i + 1, close - i - 1));
      if (!node->is_array() || idx >= node->size()) return std::nullopt;
      node = &(*node)[idx];
      i = close + 1;
    } else {
      std::size_t end = i;
      while (end < path.size() && (std::isalnum(static_cast<unsigned char>(path[end])) || path[end] == '_')) ++end;
      const std::string key = path.substr(i, end - i);
      if (key.empty() || !node->is_object() || !node->contains(key)) return std::nullopt;
      node = &(*node)[key];
      i = end;
    }
  }
  return *node;
}

}  // namespace oracle

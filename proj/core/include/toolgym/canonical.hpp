#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>

#include "toolgym/tool_call.hpp"

namespace toolgym {

/// 128-bit digest of a call's canonical form.
struct CacheKey {
  std::array<std::uint8_t, 16> bytes{};

  std::string hex() const;
  friend auto operator<=>(const CacheKey&, const CacheKey&) = default;
};

struct CacheKeyHash {
  std::size_t operator()(const CacheKey& k) const noexcept;
};

/// Function name, a 0x00 separator, then the canonical argument text.
std::string canonical_call_string(const ToolCall& call);

CacheKey canonical_key(const ToolCall& call);

}  // namespace toolgym

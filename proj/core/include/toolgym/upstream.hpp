#pragma once

#include <cstdint>
#include <string_view>

#include "toolgym/rng.hpp"
#include "toolgym/tool_call.hpp"

namespace toolgym {

/// Source of fresh observations when growing a cache. Must be deterministic:
/// the same (call, seed) always yields a byte-identical observation.
class Upstream {
 public:
  virtual ~Upstream() = default;
  virtual Observation respond(const ToolCall& call, std::uint64_t seed) const = 0;
};

/// Draws arguments for steps whose values do not come from earlier observations.
class ArgumentSampler {
 public:
  virtual ~ArgumentSampler() = default;
  virtual Value sample_args(std::string_view function, Rng& rng) const = 0;
};

}  // namespace toolgym

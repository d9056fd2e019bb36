#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "toolgym/upstream.hpp"

namespace toolgym {

/// Seeded synthetic travel API (hotels, flights, cars, attractions, taxis).
///
/// Each function has an argument pool ("samples") and a response shape. Shape
/// strings may contain placeholders:
///   ${arg:NAME}   argument value          ${digits:N}  N-digit id
///   ${token:N}    opaque base64-ish key   ${lat} ${lon} coordinates
///   ${int:A:B}    integer in [A,B]        ${price}     amount with cents
///   ${pick:a|b}   one of the options      ${date:FROM:DAYS} ISO date
///   ${upper:N}    N capital letters
/// A string that is exactly one placeholder takes the placeholder's type.
/// Inside a list, {"$repeat": N or [MIN, MAX], "item": shape} expands to
/// several generated items.
class MockDomain final : public Upstream, public ArgumentSampler {
 public:
  static MockDomain from_json(const Value& doc);
  static MockDomain load(const std::filesystem::path& file);

  Observation respond(const ToolCall& call, std::uint64_t seed) const override;
  Value sample_args(std::string_view function, Rng& rng) const override;

  bool knows(std::string_view function) const;
  std::size_t function_count() const noexcept { return functions_.size(); }

 private:
  struct Function {
    Value samples = Value::object();
    Value response;
  };
  std::map<std::string, Function, std::less<>> functions_;
};

/// Expands a shape against a call's arguments; exposed for tests.
Value render_shape(const Value& shape, const Value& args, Rng& rng);

}  // namespace toolgym

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "toolgym/value.hpp"

namespace toolgym {

/// One action: a function name plus its argument map.
struct ToolCall {
  std::string function;
  Value args = Value::object();

  ToolCall() = default;
  /// Throws SchemaError unless function is non-empty and args is an object.
  ToolCall(std::string function, Value args);

  /// Accepts {"name": ..., "arguments": {...}}.
  static ToolCall from_json(const Value& doc);
  Value to_json() const;

  friend bool operator==(const ToolCall& a, const ToolCall& b);
};

enum class ErrorCode { kValidationFailed, kCacheMiss, kUnknownFunction };

std::string_view to_string(ErrorCode code) noexcept;
std::optional<ErrorCode> error_code_from_string(std::string_view s) noexcept;

struct ObservationError {
  ErrorCode code;
  std::string message;
};

/// The result of executing a call: a payload, or a structured error.
class Observation {
 public:
  Observation() = default;

  /// Throws SchemaError when payload is null or not list/map rooted.
  static Observation success(Value payload);
  static Observation failure(ErrorCode code, std::string message, Value details = nullptr);

  bool is_error() const noexcept { return error_.has_value(); }
  const std::optional<ObservationError>& error() const noexcept { return error_; }
  const Value& payload() const noexcept { return payload_; }

  /// Wire form: the raw payload for successes; {"error": {...}} for failures.
  Value to_json() const;
  static Observation from_json(const Value& doc);

  friend bool operator==(const Observation& a, const Observation& b);

 private:
  Value payload_;
  std::optional<ObservationError> error_;
};

}  // namespace toolgym

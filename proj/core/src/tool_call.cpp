#include "toolgym/tool_call.hpp"

#include "toolgym/errors.hpp"

namespace toolgym {

ToolCall::ToolCall(std::string fn, Value a) : function(std::move(fn)), args(std::move(a)) {
  if (function.empty()) throw SchemaError("tool call has an empty function name");
  if (args.is_null()) args = Value::object();
  if (!args.is_object()) throw SchemaError("arguments of '" + function + "' must be an object");
}

ToolCall ToolCall::from_json(const Value& doc) {
  if (!doc.is_object()) throw SchemaError("tool call must be an object");
  auto name = doc.find("name");
  if (name == doc.end() || !name->is_string()) throw SchemaError("tool call is missing a string 'name'");
  Value args = Value::object();
  if (auto a = doc.find("arguments"); a != doc.end()) args = *a;
  return ToolCall(name->get<std::string>(), std::move(args));
}

Value ToolCall::to_json() const { return Value{{"name", function}, {"arguments", args}}; }

bool operator==(const ToolCall& a, const ToolCall& b) {
  return a.function == b.function && canonical_equal(a.args, b.args);
}

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kValidationFailed:
      return "VALIDATION_FAILED";
    case ErrorCode::kCacheMiss:
      return "CACHE_MISS";
    case ErrorCode::kUnknownFunction:
      return "UNKNOWN_FUNCTION";
  }
  return "UNKNOWN_FUNCTION";
}

std::optional<ErrorCode> error_code_from_string(std::string_view s) noexcept {
  if (s == "VALIDATION_FAILED") return ErrorCode::kValidationFailed;
  if (s == "CACHE_MISS") return ErrorCode::kCacheMiss;
  if (s == "UNKNOWN_FUNCTION") return ErrorCode::kUnknownFunction;
  return std::nullopt;
}

Observation Observation::success(Value payload) {
  if (!payload.is_object() && !payload.is_array()) {
    throw SchemaError("observation payload must be a list or a map");
  }
  Observation o;
  o.payload_ = std::move(payload);
  return o;
}

Observation Observation::failure(ErrorCode code, std::string message, Value details) {
  Observation o;
  Value err{{"code", std::string(to_string(code))}, {"message", message}};
  if (!details.is_null()) err["details"] = std::move(details);
  o.payload_ = Value{{"status", false}, {"error", std::move(err)}};
  o.error_ = ObservationError{code, std::move(message)};
  return o;
}

Value Observation::to_json() const { return payload_; }

Observation Observation::from_json(const Value& doc) {
  if (doc.is_object() && doc.contains("error") && doc.contains("status") && doc["status"] == false) {
    const auto& err = doc["error"];
    if (err.is_object() && err.contains("code") && err["code"].is_string()) {
      if (auto code = error_code_from_string(err["code"].get<std::string>())) {
        Observation o;
        o.payload_ = doc;
        o.error_ = ObservationError{*code, err.value("message", std::string{})};
        return o;
      }
    }
  }
  return success(doc);
}

bool operator==(const Observation& a, const Observation& b) {
  return a.is_error() == b.is_error() && canonical_equal(a.payload_, b.payload_);
}

}  // namespace toolgym

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "toolgym/value.hpp"

namespace toolgym {

enum class ParamType { kString, kInteger, kNumber, kBoolean, kArray, kObject };

std::string_view to_string(ParamType t) noexcept;
std::optional<ParamType> param_type_from_string(std::string_view s) noexcept;
bool value_matches(ParamType t, const Value& v) noexcept;

/// Extra per-parameter check beyond type.
struct ValidatorSpec {
  enum class Kind { kDate, kTime, kLatitude, kLongitude, kEnum };
  Kind kind = Kind::kEnum;
  std::vector<Value> allowed;  // enum members, kEnum only
};

struct ParamSchema {
  ParamType type = ParamType::kString;
  bool required = false;
  std::optional<ValidatorSpec> constraint;
  std::string description;
};

struct FunctionSchema {
  std::string name;
  std::string description;
  std::string domain;
  std::map<std::string, ParamSchema> params;
  /// Top-level fields a well-formed map-rooted response carries.
  std::vector<std::string> response_fields;

  /// OpenAI-style tool description sent to agents.
  Value to_tool_json() const;
};

FunctionSchema function_schema_from_json(const Value& doc);

/// The function registry: every callable tool with its parameter constraints.
class Registry {
 public:
  Registry() = default;
  explicit Registry(std::vector<FunctionSchema> functions);

  static Registry from_json(const Value& doc);
  static Registry load(const std::filesystem::path& file);

  const FunctionSchema* find(std::string_view name) const;
  std::size_t size() const noexcept { return functions_.size(); }
  const std::map<std::string, FunctionSchema, std::less<>>& functions() const noexcept { return functions_; }

  Value tool_list() const;

 private:
  std::map<std::string, FunctionSchema, std::less<>> functions_;
};

}  // namespace toolgym

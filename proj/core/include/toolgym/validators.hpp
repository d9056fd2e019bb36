#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "toolgym/schema.hpp"
#include "toolgym/tool_call.hpp"

namespace toolgym {

/// The eight argument validators, in the order they run.
enum class ValidatorId {
  kRequired = 1,
  kTypeMatch = 2,
  kDateFormat = 3,
  kTimeFormat = 4,
  kLatitudeRange = 5,
  kLongitudeRange = 6,
  kEnumMembership = 7,
  kNonEmptyString = 8,
};

std::string_view to_string(ValidatorId id) noexcept;

struct Violation {
  ValidatorId validator;
  std::string param;
  std::string message;
};

struct ValidationResult {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  Value to_json() const;
};

bool is_valid_date(std::string_view s) noexcept;
bool is_valid_time(std::string_view s) noexcept;

/// Runs all validators and collects every violation. Parameters that are not
/// in the schema are ignored.
ValidationResult validate_args(const FunctionSchema& schema, const ToolCall& call);

}  // namespace toolgym

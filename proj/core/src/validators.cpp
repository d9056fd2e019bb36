#include "toolgym/validators.hpp"

#include <algorithm>
#include <cctype>

namespace toolgym {
namespace {

bool digits(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

int to_num(std::string_view s) {
  int v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

}  // namespace

std::string_view to_string(ValidatorId id) noexcept {
  switch (id) {
    case ValidatorId::kRequired:
      return "required";
    case ValidatorId::kTypeMatch:
      return "type";
    case ValidatorId::kDateFormat:
      return "date_format";
    case ValidatorId::kTimeFormat:
      return "time_format";
    case ValidatorId::kLatitudeRange:
      return "latitude_range";
    case ValidatorId::kLongitudeRange:
      return "longitude_range";
    case ValidatorId::kEnumMembership:
      return "enum";
    case ValidatorId::kNonEmptyString:
      return "non_empty";
  }
  return "unknown";
}

Value ValidationResult::to_json() const {
  Value out = Value::array();
  for (const auto& v : violations) {
    out.push_back(Value{{"validator", std::string(to_string(v.validator))},
                        {"param", v.param},
                        {"message", v.message}});
  }
  return out;
}

bool is_valid_date(std::string_view s) noexcept {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  auto y = s.substr(0, 4), m = s.substr(5, 2), d = s.substr(8, 2);
  if (!digits(y) || !digits(m) || !digits(d)) return false;
  const int year = to_num(y), month = to_num(m), day = to_num(d);
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month < 1 || month > 12) return false;
  const int max_day = kDays[month - 1] + (month == 2 && is_leap(year) ? 1 : 0);
  return day >= 1 && day <= max_day;
}

bool is_valid_time(std::string_view s) noexcept {
  if (s.size() != 5 || s[2] != ':') return false;
  auto h = s.substr(0, 2), m = s.substr(3, 2);
  if (!digits(h) || !digits(m)) return false;
  return to_num(h) <= 23 && to_num(m) <= 59;
}

ValidationResult validate_args(const FunctionSchema& schema, const ToolCall& call) {
  ValidationResult result;
  auto add = [&](ValidatorId id, const std::string& param, std::string message) {
    result.violations.push_back({id, param, std::move(message)});
  };
  // Present and well-typed parameters; later validators only look at these.
  std::vector<std::pair<const std::string*, const ParamSchema*>> typed;

  for (const auto& [name, p] : schema.params) {
    if (p.required && !call.args.contains(name)) add(ValidatorId::kRequired, name, "missing required parameter");
  }
  for (const auto& [name, p] : schema.params) {
    auto it = call.args.find(name);
    if (it == call.args.end()) continue;
    if (!value_matches(p.type, *it)) {
      add(ValidatorId::kTypeMatch, name,
          "expected " + std::string(to_string(p.type)) + ", got " + std::string(to_string(value_type(*it))));
    } else {
      typed.emplace_back(&name, &p);
    }
  }
  auto kind_is = [](const ParamSchema& p, ValidatorSpec::Kind k) { return p.constraint && p.constraint->kind == k; };
  for (auto [name, p] : typed) {
    const auto& v = call.args.at(*name);
    if (kind_is(*p, ValidatorSpec::Kind::kDate) && v.is_string() && !is_valid_date(v.get<std::string>())) {
      add(ValidatorId::kDateFormat, *name, "'" + v.get<std::string>() + "' is not a valid YYYY-MM-DD date");
    }
  }
  for (auto [name, p] : typed) {
    const auto& v = call.args.at(*name);
    if (kind_is(*p, ValidatorSpec::Kind::kTime) && v.is_string() && !is_valid_time(v.get<std::string>())) {
      add(ValidatorId::kTimeFormat, *name, "'" + v.get<std::string>() + "' is not a valid HH:MM time");
    }
  }
  for (auto [name, p] : typed) {
    const auto& v = call.args.at(*name);
    if (kind_is(*p, ValidatorSpec::Kind::kLatitude) && v.is_number()) {
      const double d = v.get<double>();
      if (!(d >= -90.0 && d <= 90.0)) add(ValidatorId::kLatitudeRange, *name, "latitude outside [-90, 90]");
    }
  }
  for (auto [name, p] : typed) {
    const auto& v = call.args.at(*name);
    if (kind_is(*p, ValidatorSpec::Kind::kLongitude) && v.is_number()) {
      const double d = v.get<double>();
      if (!(d >= -180.0 && d <= 180.0)) add(ValidatorId::kLongitudeRange, *name, "longitude outside [-180, 180]");
    }
  }
  for (auto [name, p] : typed) {
    const auto& v = call.args.at(*name);
    if (kind_is(*p, ValidatorSpec::Kind::kEnum)) {
      const auto& allowed = p->constraint->allowed;
      const bool member =
          std::any_of(allowed.begin(), allowed.end(), [&](const Value& a) { return canonical_equal(a, v); });
      if (!member) add(ValidatorId::kEnumMembership, *name, canonical_string(v) + " is not an allowed value");
    }
  }
  for (auto [name, p] : typed) {
    const auto& v = call.args.at(*name);
    if (v.is_string()) {
      const auto& s = v.get_ref<const std::string&>();
      const bool blank =
          std::all_of(s.begin(), s.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
      if (blank) add(ValidatorId::kNonEmptyString, *name, "must not be empty");
    }
  }
  return result;
}

}  // namespace toolgym

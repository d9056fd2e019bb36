#include "toolgym/schema.hpp"

#include <fstream>

#include "toolgym/errors.hpp"

namespace toolgym {

std::string_view to_string(ParamType t) noexcept {
  switch (t) {
    case ParamType::kString:
      return "string";
    case ParamType::kInteger:
      return "integer";
    case ParamType::kNumber:
      return "number";
    case ParamType::kBoolean:
      return "boolean";
    case ParamType::kArray:
      return "array";
    case ParamType::kObject:
      return "object";
  }
  return "string";
}

std::optional<ParamType> param_type_from_string(std::string_view s) noexcept {
  if (s == "string") return ParamType::kString;
  if (s == "integer") return ParamType::kInteger;
  if (s == "number") return ParamType::kNumber;
  if (s == "boolean") return ParamType::kBoolean;
  if (s == "array") return ParamType::kArray;
  if (s == "object") return ParamType::kObject;
  return std::nullopt;
}

bool value_matches(ParamType t, const Value& v) noexcept {
  switch (t) {
    case ParamType::kString:
      return v.is_string();
    case ParamType::kInteger:
      return v.is_number_integer();
    case ParamType::kNumber:
      return v.is_number();
    case ParamType::kBoolean:
      return v.is_boolean();
    case ParamType::kArray:
      return v.is_array();
    case ParamType::kObject:
      return v.is_object();
  }
  return false;
}

namespace {

ValidatorSpec validator_from_json(const Value& doc) {
  if (doc.is_string()) {
    const auto& s = doc.get_ref<const std::string&>();
    if (s == "date") return {ValidatorSpec::Kind::kDate, {}};
    if (s == "time") return {ValidatorSpec::Kind::kTime, {}};
    if (s == "latitude") return {ValidatorSpec::Kind::kLatitude, {}};
    if (s == "longitude") return {ValidatorSpec::Kind::kLongitude, {}};
    throw SchemaError("unknown constraint '" + s + "'");
  }
  if (doc.is_object() && doc.contains("enum") && doc["enum"].is_array()) {
    ValidatorSpec spec{ValidatorSpec::Kind::kEnum, {}};
    for (const auto& v : doc["enum"]) spec.allowed.push_back(v);
    return spec;
  }
  throw SchemaError("constraint must be a name or {\"enum\": [...]}");
}

Value validator_to_json(const ValidatorSpec& spec) {
  switch (spec.kind) {
    case ValidatorSpec::Kind::kDate:
      return "date";
    case ValidatorSpec::Kind::kTime:
      return "time";
    case ValidatorSpec::Kind::kLatitude:
      return "latitude";
    case ValidatorSpec::Kind::kLongitude:
      return "longitude";
    case ValidatorSpec::Kind::kEnum:
      return Value{{"enum", spec.allowed}};
  }
  return nullptr;
}

}  // namespace

FunctionSchema function_schema_from_json(const Value& doc) {
  if (!doc.is_object() || !doc.contains("name") || !doc["name"].is_string()) {
    throw SchemaError("function schema needs a string 'name'");
  }
  FunctionSchema fs;
  fs.name = doc["name"].get<std::string>();
  fs.description = doc.value("description", std::string{});
  fs.domain = doc.value("domain", std::string{});
  if (auto params = doc.find("params"); params != doc.end()) {
    if (!params->is_object()) throw SchemaError(fs.name + ": 'params' must be a map");
    for (auto it = params->begin(); it != params->end(); ++it) {
      const Value& p = it.value();
      ParamSchema ps;
      auto type = param_type_from_string(p.value("type", std::string{"string"}));
      if (!type) throw SchemaError(fs.name + "." + it.key() + ": unknown type");
      ps.type = *type;
      ps.required = p.value("required", false);
      ps.description = p.value("description", std::string{});
      if (p.contains("constraint")) ps.constraint = validator_from_json(p["constraint"]);
      fs.params.emplace(it.key(), std::move(ps));
    }
  }
  if (auto rf = doc.find("response_fields"); rf != doc.end()) {
    for (const auto& f : *rf) fs.response_fields.push_back(f.get<std::string>());
  }
  return fs;
}

Value FunctionSchema::to_tool_json() const {
  Value properties = Value::object();
  Value required = Value::array();
  for (const auto& [pname, p] : params) {
    Value prop{{"type", std::string(to_string(p.type))}};
    if (!p.description.empty()) prop["description"] = p.description;
    if (p.constraint) {
      switch (p.constraint->kind) {
        case ValidatorSpec::Kind::kEnum:
          prop["enum"] = p.constraint->allowed;
          break;
        case ValidatorSpec::Kind::kDate:
          prop["format"] = "YYYY-MM-DD";
          break;
        case ValidatorSpec::Kind::kTime:
          prop["format"] = "HH:MM";
          break;
        default:
          prop["constraint"] = validator_to_json(*p.constraint);
      }
    }
    properties[pname] = std::move(prop);
    if (p.required) required.push_back(pname);
  }
  return Value{{"type", "function"},
               {"function",
                {{"name", name},
                 {"description", description},
                 {"parameters", {{"type", "object"}, {"properties", properties}, {"required", required}}}}}};
}

Registry::Registry(std::vector<FunctionSchema> functions) {
  for (auto& f : functions) {
    std::string name = f.name;
    if (!functions_.emplace(name, std::move(f)).second) {
      throw SchemaError("duplicate function '" + name + "' in registry");
    }
  }
}

Registry Registry::from_json(const Value& doc) {
  const Value& list = doc.is_object() && doc.contains("functions") ? doc["functions"] : doc;
  if (!list.is_array()) throw SchemaError("registry must be a list of function schemas");
  std::vector<FunctionSchema> fs;
  for (const auto& f : list) fs.push_back(function_schema_from_json(f));
  return Registry(std::move(fs));
}

Registry Registry::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot open registry " + file.string());
  try {
    return from_json(Value::parse(in));
  } catch (const Value::parse_error& e) {
    throw SchemaError(file.string() + ": " + e.what());
  }
}

const FunctionSchema* Registry::find(std::string_view name) const {
  auto it = functions_.find(name);
  return it == functions_.end() ? nullptr : &it->second;
}

Value Registry::tool_list() const {
  Value out = Value::array();
  for (const auto& [_, f] : functions_) out.push_back(f.to_tool_json());
  return out;
}

}  // namespace toolgym

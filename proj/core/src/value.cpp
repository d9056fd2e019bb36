#include "toolgym/value.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

namespace toolgym {
namespace {

void append_string(std::string& out, const std::string& s) {
  // Delegate escaping to the JSON library so wire and canonical text agree.
  out += Value(s).dump(-1, ' ', false, Value::error_handler_t::replace);
}

void append_float(std::string& out, double d) {
  if (!std::isfinite(d)) {
    out += "null";
    return;
  }
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), d);
  std::string_view text(buf, static_cast<std::size_t>(end - buf));
  out += text;
  // Keep floats distinguishable from integers.
  if (text.find_first_of(".eE") == std::string_view::npos) out += ".0";
}

enum class Style { kCanonical, kSpaced };

void append_value(std::string& out, const Value& v, Style style) {
  const char* comma = style == Style::kCanonical ? "," : ", ";
  const char* colon = style == Style::kCanonical ? ":" : ": ";
  switch (v.type()) {
    case Value::value_t::null:
    case Value::value_t::discarded:
      out += "null";
      return;
    case Value::value_t::boolean:
      out += v.get<bool>() ? "true" : "false";
      return;
    case Value::value_t::number_integer:
      out += std::to_string(v.get<std::int64_t>());
      return;
    case Value::value_t::number_unsigned:
      out += std::to_string(v.get<std::uint64_t>());
      return;
    case Value::value_t::number_float:
      append_float(out, v.get<double>());
      return;
    case Value::value_t::string:
      append_string(out, v.get_ref<const std::string&>());
      return;
    case Value::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& item : v) {
        if (!first) out += comma;
        first = false;
        append_value(out, item, style);
      }
      out += ']';
      return;
    }
    case Value::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += comma;
        first = false;
        append_string(out, it.key());
        out += colon;
        append_value(out, it.value(), style);
      }
      out += '}';
      return;
    }
    case Value::value_t::binary:
      out += "null";
      return;
  }
}

}  // namespace

ValueType value_type(const Value& v) noexcept {
  switch (v.type()) {
    case Value::value_t::boolean:
      return ValueType::kBoolean;
    case Value::value_t::number_integer:
    case Value::value_t::number_unsigned:
      return ValueType::kInteger;
    case Value::value_t::number_float:
      return ValueType::kFloat;
    case Value::value_t::string:
      return ValueType::kString;
    case Value::value_t::array:
      return ValueType::kList;
    case Value::value_t::object:
      return ValueType::kMap;
    default:
      return ValueType::kNull;
  }
}

std::string_view to_string(ValueType t) noexcept {
  switch (t) {
    case ValueType::kNull:
      return "null";
    case ValueType::kBoolean:
      return "boolean";
    case ValueType::kInteger:
      return "integer";
    case ValueType::kFloat:
      return "float";
    case ValueType::kString:
      return "string";
    case ValueType::kList:
      return "list";
    case ValueType::kMap:
      return "map";
  }
  return "null";
}

std::string canonical_string(const Value& v) {
  std::string out;
  out.reserve(64);
  append_value(out, v, Style::kCanonical);
  return out;
}

bool canonical_equal(const Value& a, const Value& b) {
  if (value_type(a) != value_type(b)) return false;
  return canonical_string(a) == canonical_string(b);
}

std::string dump_spaced(const Value& v) {
  std::string out;
  append_value(out, v, Style::kSpaced);
  return out;
}

}  // namespace toolgym

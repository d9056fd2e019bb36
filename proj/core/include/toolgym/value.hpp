#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

namespace toolgym {

/// Parameter and payload values. Objects keep their keys sorted, which the
/// canonical form relies on.
using Value = nlohmann::json;

enum class ValueType { kNull, kBoolean, kInteger, kFloat, kString, kList, kMap };

ValueType value_type(const Value& v) noexcept;
std::string_view to_string(ValueType t) noexcept;

/// Canonical text of a value: sorted keys, no insignificant whitespace,
/// integers without leading zeros, floats in shortest round-trip form.
std::string canonical_string(const Value& v);

/// Equality under the canonical form. Unlike Value::operator==, 1 and 1.0
/// are different values here.
bool canonical_equal(const Value& a, const Value& b);

/// JSON text with ", " and ": " separators, as used on the tool-call wire.
std::string dump_spaced(const Value& v);

}  // namespace toolgym

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "toolgym/tool_call.hpp"

namespace toolgym {

inline constexpr std::string_view kToolCallOpen = "<tool_call>";
inline constexpr std::string_view kToolCallClose = "</tool_call>";
inline constexpr std::string_view kToolResponseOpen = "<tool_response>";
inline constexpr std::string_view kToolResponseClose = "</tool_response>";

/// Extracts every <tool_call> block in document order. Each body must be
/// {"name": ..., "arguments": {...}}. Text without blocks yields an empty
/// list. Throws ParseError for malformed or unterminated blocks.
std::vector<ToolCall> parse_tool_calls(std::string_view text);

/// Renders calls as consecutive <tool_call> blocks separated by newlines.
std::string render_tool_calls(std::span<const ToolCall> calls);

/// <tool_response> block whose body is {"result": payload}.
std::string render_tool_response(const Observation& obs);

/// Error response for a turn whose tool calls could not be parsed.
std::string render_parse_error(std::string_view message);

}  // namespace toolgym

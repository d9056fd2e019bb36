#include "toolgym/protocol.hpp"

#include "toolgym/errors.hpp"

namespace toolgym {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<ToolCall> parse_tool_calls(std::string_view text) {
  std::vector<ToolCall> calls;
  std::size_t pos = 0;
  for (std::size_t block = 0;; ++block) {
    const auto open = text.find(kToolCallOpen, pos);
    if (open == std::string_view::npos) break;
    const auto body_start = open + kToolCallOpen.size();
    const auto close = text.find(kToolCallClose, body_start);
    if (close == std::string_view::npos) throw ParseError(block, "unterminated block");
    const auto body = trim(text.substr(body_start, close - body_start));
    Value doc;
    try {
      doc = Value::parse(body);
    } catch (const Value::parse_error& e) {
      throw ParseError(block, std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError(block, "body is not an object");
    auto name = doc.find("name");
    if (name == doc.end() || !name->is_string() || name->get_ref<const std::string&>().empty()) {
      throw ParseError(block, "missing string 'name'");
    }
    auto args = doc.find("arguments");
    if (args == doc.end()) throw ParseError(block, "missing 'arguments'");
    Value arguments = *args;
    if (arguments.is_string()) {
      // Some agents emit arguments as a JSON-encoded string.
      try {
        arguments = Value::parse(arguments.get<std::string>());
      } catch (const Value::parse_error&) {
        throw ParseError(block, "'arguments' string is not JSON");
      }
    }
    if (!arguments.is_object()) throw ParseError(block, "'arguments' is not an object");
    calls.emplace_back(name->get<std::string>(), std::move(arguments));
    pos = close + kToolCallClose.size();
  }
  return calls;
}

std::string render_tool_calls(std::span<const ToolCall> calls) {
  std::string out;
  for (const auto& c : calls) {
    if (!out.empty()) out += '\n';
    out += kToolCallOpen;
    out += "\n{\"name\": ";
    out += dump_spaced(Value(c.function));
    out += ", \"arguments\": ";
    out += dump_spaced(c.args);
    out += "}\n";
    out += kToolCallClose;
  }
  return out;
}

std::string render_tool_response(const Observation& obs) {
  std::string out(kToolResponseOpen);
  out += "\n{\"result\": ";
  out += dump_spaced(obs.payload());
  out += "}\n";
  out += kToolResponseClose;
  return out;
}

std::string render_parse_error(std::string_view message) {
  Value err{{"status", false}, {"error", {{"code", "PARSE_ERROR"}, {"message", std::string(message)}}}};
  std::string out(kToolResponseOpen);
  out += "\n{\"result\": ";
  out += dump_spaced(err);
  out += "}\n";
  out += kToolResponseClose;
  return out;
}

}  // namespace toolgym

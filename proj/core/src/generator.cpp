#include "toolgym/generator.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "toolgym/errors.hpp"

namespace toolgym {

const char* const kQueryGenerationSystemPrompt =
    "You are generating natural language queries for a travel booking assistant. You will be given EXACT API "
    "parameter values to use (from validated cache). Your task is ONLY to generate a natural language query that "
    "matches these exact parameters. DO NOT modify the parameter values.";

Value QueryDraft::to_json() const {
  return Value{{"query", query}, {"chosen_parameters", chosen_parameters}, {"variation_notes", variation_notes}};
}

QueryDraft QueryDraft::from_json(const Value& doc) {
  if (!doc.is_object()) throw GeneratorError("draft is not an object");
  QueryDraft d;
  if (!doc.contains("query") || !doc["query"].is_string()) throw GeneratorError("draft has no string 'query'");
  d.query = doc["query"].get<std::string>();
  if (!doc.contains("chosen_parameters") || !doc["chosen_parameters"].is_array()) {
    throw GeneratorError("draft has no 'chosen_parameters' list");
  }
  for (const auto& p : doc["chosen_parameters"]) d.chosen_parameters.push_back(p);
  d.variation_notes = doc.value("variation_notes", std::string{});
  return d;
}

namespace {

std::string quoted_value(const Value& v) { return v.is_string() ? v.get<std::string>() : canonical_string(v); }

}  // namespace

QueryPrompt build_query_prompt(const Trace& trace) {
  std::string user = "Workflow pattern: ";
  for (std::size_t i = 0; i < trace.pattern.size(); ++i) {
    if (i) user += " -> ";
    user += trace.pattern[i];
  }
  user += "\nEXACT PARAMETERS TO USE (do not modify):\n";
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& step = trace.steps[i];
    user += "Step " + std::to_string(i) + " - " + step.call.function + ":\n";
    for (auto it = step.call.args.begin(); it != step.call.args.end(); ++it) {
      if (step.dependency_params.count(it.key())) continue;
      user += "  " + it.key() + ": '" + quoted_value(it.value()) + "'\n";
    }
    if (!step.dependency_params.empty()) user += "  (Parameters from previous step results)\n";
  }
  user +=
      "\nTask: Generate a query matching these exact parameters.\n"
      "OUTPUT FORMAT (JSON):\n"
      "{\"query\": \"...\", \"chosen_parameters\": [...],\n"
      " \"variation_notes\": \"Brief scenario description\"}\n"
      "IMPORTANT: Query must match the exact parameters above.\n";
  return QueryPrompt{kQueryGenerationSystemPrompt, std::move(user)};
}

namespace {

std::string humanize(std::string_view name) {
  std::string out;
  for (char c : name) out += c == '_' ? ' ' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string purpose(const Registry* registry, const std::string& function) {
  if (registry) {
    if (const auto* f = registry->find(function); f && !f->description.empty()) {
      std::string d = f->description;
      while (!d.empty() && (d.back() == '.' || d.back() == ' ')) d.pop_back();
      if (!d.empty()) d[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(d[0])));
      return d;
    }
  }
  return humanize(function);
}

}  // namespace

QueryDraft FallbackGenerator::generate(const Trace& trace, const QueryPrompt&) {
  QueryDraft d;
  std::string q;
  const std::size_t n = trace.steps.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& step = trace.steps[i];
    Value echo = Value::object();
    std::string clause = purpose(registry_, step.call.function);
    std::string params;
    for (auto it = step.call.args.begin(); it != step.call.args.end(); ++it) {
      if (step.dependency_params.count(it.key())) continue;
      echo[it.key()] = it.value();
      if (!params.empty()) params += ", ";
      params += humanize(it.key()) + " \"" + quoted_value(it.value()) + "\"";
    }
    if (!params.empty()) clause += " with " + params;
    if (!step.dependency_params.empty()) clause += ", using the results from the previous step";
    if (n == 1) {
      q = "Please " + clause + ".";
    } else if (i == 0) {
      q = "First, " + clause + ".";
    } else if (i + 1 == n) {
      q += " Finally, " + clause + ".";
    } else {
      q += " Then, " + clause + ".";
    }
    d.chosen_parameters.push_back(std::move(echo));
  }
  d.query = std::move(q);
  d.variation_notes = "template-stitched query for " + trace.template_id;
  return d;
}

QueryDraft ExecGenerator::generate(const Trace& trace, const QueryPrompt& prompt) {
  Value steps = Value::array();
  for (const auto& s : trace.steps) {
    steps.push_back(Value{{"name", s.call.function},
                          {"arguments", s.call.args},
                          {"dependency_params", Value(std::vector<std::string>(s.dependency_params.begin(),
                                                                               s.dependency_params.end()))}});
  }
  Value request{{"system", prompt.system}, {"user", prompt.user},
                {"trace", {{"template_id", trace.template_id}, {"steps", std::move(steps)}}}};

  char path[] = "/tmp/toolgym-gen-XXXXXX";
  const int fd = ::mkstemp(path);
  if (fd < 0) throw GeneratorError("cannot create request file");
  ::close(fd);
  {
    std::ofstream req(path);
    req << request.dump() << '\n';
  }
  const std::string command = command_ + " < '" + path + "'";
  std::string output;
  FILE* pipe = ::popen(command.c_str(), "r");
  if (pipe == nullptr) {
    std::filesystem::remove(path);
    throw GeneratorError("cannot start generator '" + command_ + "'");
  }
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) output.append(buf.data(), got);
  const int status = ::pclose(pipe);
  std::filesystem::remove(path);
  if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    throw GeneratorError("generator '" + command_ + "' exited with failure");
  }
  try {
    return QueryDraft::from_json(Value::parse(output));
  } catch (const Value::parse_error& e) {
    throw GeneratorError(std::string("generator output is not JSON: ") + e.what());
  }
}

QueryDraft generate_query(const Trace& trace, Generator& generator) {
  return generator.generate(trace, build_query_prompt(trace));
}

bool verify_echo_back(const QueryDraft& draft, const Trace& trace) {
  if (draft.chosen_parameters.size() != trace.steps.size()) return false;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& step = trace.steps[i];
    const Value& echoed = draft.chosen_parameters[i];
    for (auto it = step.call.args.begin(); it != step.call.args.end(); ++it) {
      if (step.dependency_params.count(it.key())) continue;
      if (!echoed.is_object()) return false;
      auto e = echoed.find(it.key());
      if (e == echoed.end() || !canonical_equal(*e, it.value())) return false;
    }
  }
  return true;
}

}  // namespace toolgym

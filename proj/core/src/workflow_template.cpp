#include "toolgym/workflow_template.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <queue>
#include <sstream>

#include "toolgym/errors.hpp"

namespace toolgym {
namespace {

std::size_t parse_step_key(const std::string& key, std::size_t n) {
  std::size_t v = 0;
  auto [end, ec] = std::from_chars(key.data(), key.data() + key.size(), v);
  if (ec != std::errc{} || end != key.data() + key.size() || key.empty()) {
    throw SchemaError("dependency key '" + key + "' is not a step index");
  }
  if (v >= n) throw SchemaError("dependency key " + key + " is outside the pattern");
  return v;
}

std::size_t step_index(const Value& v, const char* what) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw SchemaError(std::string(what) + " must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

const StepDependencies kNoDependencies{};

}  // namespace

std::vector<Edge> WorkflowTemplate::edges() const {
  std::vector<Edge> out;
  for (const auto& [step, deps] : dependencies) {
    for (auto from : deps.depends_on) out.emplace_back(from, step);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

const StepDependencies& WorkflowTemplate::step(std::size_t i) const {
  auto it = dependencies.find(i);
  return it == dependencies.end() ? kNoDependencies : it->second;
}

bool WorkflowTemplate::is_dependency_arg(std::size_t s, std::string_view param) const {
  const auto& deps = step(s).args;
  return deps.find(std::string(param)) != deps.end();
}

WorkflowTemplate template_from_json(const Value& doc, std::string id) {
  if (!doc.is_object()) throw SchemaError("template must be an object");
  WorkflowTemplate t;
  t.id = doc.contains("id") && doc["id"].is_string() ? doc["id"].get<std::string>() : std::move(id);

  auto pattern = doc.find("pattern");
  if (pattern == doc.end()) throw SchemaError("template is missing 'pattern'");
  if (!pattern->is_array() || pattern->empty()) throw SchemaError("'pattern' must be a non-empty list");
  for (const auto& f : *pattern) {
    if (!f.is_string() || f.get_ref<const std::string&>().empty()) {
      throw SchemaError("'pattern' entries must be non-empty strings");
    }
    t.pattern.push_back(f.get<std::string>());
  }
  const std::size_t n = t.pattern.size();

  if (auto deps = doc.find("dependencies"); deps != doc.end()) {
    if (!deps->is_object()) throw SchemaError("'dependencies' must be a map");
    for (auto it = deps->begin(); it != deps->end(); ++it) {
      const std::size_t step = parse_step_key(it.key(), n);
      const Value& body = it.value();
      if (!body.is_object()) throw SchemaError("dependencies of step " + it.key() + " must be a map");
      StepDependencies sd;
      auto on = body.find("depends_on");
      if (on == body.end()) throw SchemaError("step " + it.key() + " is missing 'depends_on'");
      if (!on->is_array()) throw SchemaError("'depends_on' must be a list");
      for (const auto& d : *on) {
        const std::size_t from = step_index(d, "depends_on entry");
        if (from >= step) {
          throw CycleError("step " + std::to_string(step) + " depends on step " + std::to_string(from) +
                           "; dependencies must point to earlier steps");
        }
        sd.depends_on.push_back(from);
      }
      std::sort(sd.depends_on.begin(), sd.depends_on.end());
      sd.depends_on.erase(std::unique(sd.depends_on.begin(), sd.depends_on.end()), sd.depends_on.end());

      if (auto args = body.find("dependency_args"); args != body.end()) {
        if (!args->is_object()) throw SchemaError("'dependency_args' must be a map");
        for (auto a = args->begin(); a != args->end(); ++a) {
          const Value& spec = a.value();
          if (!spec.is_object() || !spec.contains("from_step") || !spec.contains("from_field")) {
            throw SchemaError("dependency arg '" + a.key() + "' needs 'from_step' and 'from_field'");
          }
          const std::size_t from = step_index(spec["from_step"], "from_step");
          if (from >= step) {
            throw CycleError("dependency arg '" + a.key() + "' of step " + std::to_string(step) +
                             " reads from step " + std::to_string(from));
          }
          if (!std::binary_search(sd.depends_on.begin(), sd.depends_on.end(), from)) {
            throw SchemaError("dependency arg '" + a.key() + "' reads step " + std::to_string(from) +
                              " which is not listed in depends_on");
          }
          if (!spec["from_field"].is_string()) throw SchemaError("'from_field' must be a string");
          sd.args.emplace(a.key(), DependencyArg{from, parse_path(spec["from_field"].get<std::string>())});
        }
      }
      t.dependencies.emplace(step, std::move(sd));
    }
  }
  if (doc.contains("logic") && doc["logic"].is_string()) t.logic = doc["logic"].get<std::string>();
  if (doc.contains("domain") && doc["domain"].is_string()) t.domain = doc["domain"].get<std::string>();
  return t;
}

WorkflowTemplate parse_template(std::string_view doc, std::string id) {
  Value v;
  try {
    v = Value::parse(doc);
  } catch (const Value::parse_error& e) {
    throw SchemaError(std::string("template is not valid JSON: ") + e.what());
  }
  return template_from_json(v, std::move(id));
}

Value template_to_json(const WorkflowTemplate& t) {
  Value doc = Value::object();
  if (!t.id.empty()) doc["id"] = t.id;
  doc["pattern"] = t.pattern;
  Value deps = Value::object();
  for (const auto& [step, sd] : t.dependencies) {
    Value args = Value::object();
    for (const auto& [name, arg] : sd.args) {
      args[name] = Value{{"from_step", arg.from_step}, {"from_field", render(arg.from_field)}};
    }
    deps[std::to_string(step)] = Value{{"depends_on", sd.depends_on}, {"dependency_args", std::move(args)}};
  }
  doc["dependencies"] = std::move(deps);
  if (!t.logic.empty()) doc["logic"] = t.logic;
  if (!t.domain.empty()) doc["domain"] = t.domain;
  return doc;
}

std::string serialize_template(const WorkflowTemplate& t) { return template_to_json(t).dump(2); }

std::vector<WorkflowTemplate> load_templates(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<WorkflowTemplate> out;
  for (const auto& f : files) {
    std::ifstream in(f);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      out.push_back(parse_template(ss.str(), f.stem().string()));
    } catch (const Error& e) {
      throw SchemaError(f.string() + ": " + e.what());
    }
  }
  return out;
}

std::vector<int> turn_levels(const WorkflowTemplate& t) {
  std::vector<int> level(t.size(), 1);
  // Dependencies point backwards, so pattern order is already topological.
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (auto from : t.step(i).depends_on) level[i] = std::max(level[i], level[from] + 1);
  }
  return level;
}

bool topological_order(std::size_t n, const std::vector<Edge>& edges, std::vector<std::size_t>* order) {
  std::vector<std::vector<std::size_t>> children(n);
  std::vector<std::size_t> indegree(n, 0);
  for (auto [from, to] : edges) {
    if (from >= n || to >= n) return false;
    children[from].push_back(to);
    ++indegree[to];
  }
  std::queue<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push(i);
  }
  std::vector<std::size_t> out;
  while (!ready.empty()) {
    auto u = ready.front();
    ready.pop();
    out.push_back(u);
    for (auto v : children[u]) {
      if (--indegree[v] == 0) ready.push(v);
    }
  }
  if (order) *order = out;
  return out.size() == n;
}

}  // namespace toolgym

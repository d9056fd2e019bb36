#include "toolgym/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "toolgym/errors.hpp"

namespace toolgym {

void GroundTruth::validate() const {
  if (calls.empty()) throw SchemaError("ground truth has no calls");
  int max_turn = 0;
  for (const auto& c : calls) {
    if (c.turn < 1) throw SchemaError("turn indices start at 1");
    max_turn = std::max(max_turn, c.turn);
  }
  std::vector<bool> seen(static_cast<std::size_t>(max_turn) + 1, false);
  for (const auto& c : calls) seen[static_cast<std::size_t>(c.turn)] = true;
  for (int t = 1; t <= max_turn; ++t) {
    if (!seen[static_cast<std::size_t>(t)]) throw SchemaError("turn " + std::to_string(t) + " has no calls");
  }
  for (auto [from, to] : edges) {
    if (from >= calls.size() || to >= calls.size()) throw SchemaError("dependency edge out of range");
    if (calls[from].turn >= calls[to].turn) {
      throw SchemaError("dependency edge " + std::to_string(from) + "->" + std::to_string(to) +
                        " does not go to a later turn");
    }
  }
  if (expected_observations && expected_observations->size() != calls.size()) {
    throw SchemaError("expected_observations length differs from calls");
  }
}

int GroundTruth::num_turns() const noexcept {
  int n = 0;
  for (const auto& c : calls) n = std::max(n, c.turn);
  return n;
}

std::vector<std::vector<std::size_t>> GroundTruth::turns() const {
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(num_turns()));
  for (std::size_t i = 0; i < calls.size(); ++i) out[static_cast<std::size_t>(calls[i].turn - 1)].push_back(i);
  return out;
}

std::vector<ToolCall> GroundTruth::tool_calls() const {
  std::vector<ToolCall> out;
  out.reserve(calls.size());
  for (const auto& c : calls) out.push_back(c.call);
  return out;
}

bool GroundTruth::is_dependency_param(std::size_t call, std::string_view param) const {
  if (call >= calls.size()) return false;
  const auto& d = calls[call].dependency_params;
  return std::find(d.begin(), d.end(), param) != d.end();
}

Value GroundTruth::to_json() const {
  Value cs = Value::array();
  for (const auto& c : calls) {
    Value item{{"turn", c.turn}, {"name", c.call.function}, {"arguments", c.call.args}};
    if (!c.dependency_params.empty()) item["dependency_params"] = c.dependency_params;
    cs.push_back(std::move(item));
  }
  Value doc{{"calls", std::move(cs)}, {"template_id", template_id}};
  Value es = Value::array();
  for (auto [a, b] : edges) es.push_back(Value::array({a, b}));
  doc["edges"] = std::move(es);
  if (expected_observations) {
    Value obs = Value::array();
    for (const auto& o : *expected_observations) obs.push_back(o.to_json());
    doc["expected_observations"] = std::move(obs);
  }
  return doc;
}

GroundTruth GroundTruth::from_json(const Value& doc) {
  if (!doc.is_object() || !doc.contains("calls") || !doc["calls"].is_array()) {
    throw SchemaError("ground truth needs a 'calls' list");
  }
  GroundTruth gt;
  gt.template_id = doc.value("template_id", std::string{});
  for (const auto& c : doc["calls"]) {
    Call call;
    call.call = ToolCall::from_json(c);
    call.turn = c.value("turn", 1);
    if (c.contains("dependency_params")) call.dependency_params = c["dependency_params"].get<std::vector<std::string>>();
    gt.calls.push_back(std::move(call));
  }
  if (doc.contains("edges")) {
    for (const auto& e : doc["edges"]) {
      if (!e.is_array() || e.size() != 2) throw SchemaError("edges must be [from, to] pairs");
      gt.edges.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
    }
  }
  if (doc.contains("expected_observations")) {
    std::vector<Observation> obs;
    for (const auto& o : doc["expected_observations"]) obs.push_back(Observation::from_json(o));
    gt.expected_observations = std::move(obs);
  }
  gt.validate();
  return gt;
}

GroundTruth GroundTruth::from_template(const WorkflowTemplate& t, std::vector<ToolCall> calls,
                                       std::optional<std::vector<Observation>> observations) {
  if (calls.size() != t.size()) throw SchemaError("call count differs from template pattern");
  const auto levels = turn_levels(t);
  GroundTruth gt;
  gt.template_id = t.id;
  for (std::size_t i = 0; i < calls.size(); ++i) {
    Call c;
    c.turn = levels[i];
    c.call = std::move(calls[i]);
    for (const auto& [name, _] : t.step(i).args) c.dependency_params.push_back(name);
    gt.calls.push_back(std::move(c));
  }
  gt.edges = t.edges();
  gt.expected_observations = std::move(observations);
  gt.validate();
  return gt;
}

Value DatasetSample::to_json() const {
  Value prov{{"template_id", provenance.template_id},
             {"seed", provenance.seed},
             {"generator_id", provenance.generator_id}};
  if (!provenance.logic.empty()) prov["logic"] = provenance.logic;
  if (!provenance.domain.empty()) prov["domain"] = provenance.domain;
  return Value{{"id", id}, {"query", query}, {"ground_truth", ground_truth.to_json()}, {"provenance", prov}};
}

DatasetSample DatasetSample::from_json(const Value& doc) {
  if (!doc.is_object()) throw SchemaError("dataset sample must be an object");
  DatasetSample s;
  s.id = doc.value("id", std::string{});
  s.query = doc.value("query", std::string{});
  if (s.query.empty()) throw SchemaError("dataset sample '" + s.id + "' has an empty query");
  if (!doc.contains("ground_truth")) throw SchemaError("dataset sample '" + s.id + "' has no ground_truth");
  s.ground_truth = GroundTruth::from_json(doc["ground_truth"]);
  if (doc.contains("provenance")) {
    const auto& p = doc["provenance"];
    s.provenance.template_id = p.value("template_id", std::string{});
    s.provenance.seed = p.value("seed", std::uint64_t{0});
    s.provenance.generator_id = p.value("generator_id", std::string{});
    s.provenance.logic = p.value("logic", std::string{});
    s.provenance.domain = p.value("domain", std::string{});
  }
  return s;
}

void write_dataset(std::ostream& out, const std::vector<DatasetSample>& samples) {
  for (const auto& s : samples) out << canonical_string(s.to_json()) << '\n';
}

std::vector<DatasetSample> read_dataset(std::istream& in) {
  std::vector<DatasetSample> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(DatasetSample::from_json(Value::parse(line)));
    } catch (const Value::exception& e) {
      throw SchemaError("dataset line " + std::to_string(lineno) + ": " + e.what());
    } catch (const SchemaError& e) {
      throw SchemaError("dataset line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<DatasetSample> load_dataset(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot open dataset " + file.string());
  return read_dataset(in);
}

}  // namespace toolgym

#include "toolgym/complexfuncbench.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "toolgym/errors.hpp"

namespace toolgym {
namespace {

struct CfbTurn {
  std::vector<ToolCall> calls;
  std::vector<Value> responses;
};

struct CfbRecord {
  std::string id;
  std::string query;
  std::vector<CfbTurn> turns;
};

Value as_args(const Value& v) {
  if (v.is_string()) return Value::parse(v.get<std::string>());
  return v;
}

CfbRecord read_record(const Value& record) {
  if (!record.is_object() || !record.contains("conversations") || !record["conversations"].is_array()) {
    throw SchemaError("ComplexFuncBench record needs a 'conversations' list");
  }
  CfbRecord r;
  if (record.contains("id")) r.id = record["id"].is_string() ? record["id"].get<std::string>() : record["id"].dump();
  for (const auto& msg : record["conversations"]) {
    const std::string role = msg.value("role", std::string{});
    if (role == "user" && r.query.empty()) {
      r.query = msg.value("content", std::string{});
    } else if (role == "assistant" && msg.contains("function_call") && msg["function_call"].is_array()) {
      CfbTurn t;
      for (const auto& fc : msg["function_call"]) {
        t.calls.emplace_back(fc.at("name").get<std::string>(), as_args(fc.value("arguments", Value::object())));
      }
      if (!t.calls.empty()) r.turns.push_back(std::move(t));
    } else if (role == "observation" && !r.turns.empty()) {
      const Value& content = msg.contains("content") ? msg["content"] : Value();
      auto& responses = r.turns.back().responses;
      if (content.is_array() && content.size() == r.turns.back().calls.size()) {
        for (const auto& c : content) responses.push_back(c);
      } else {
        responses.push_back(content);
      }
    }
  }
  return r;
}

void collect_scalars(const Value& v, std::set<std::string>& out) {
  if (v.is_object() || v.is_array()) {
    for (const auto& item : v) collect_scalars(item, out);
  } else if (v.is_string()) {
    if (v.get_ref<const std::string&>().size() >= 4) out.insert(canonical_string(v));
  } else if (v.is_number_float()) {
    out.insert(canonical_string(v));
  } else if (v.is_number_integer() && (v.get<std::int64_t>() >= 1000 || v.get<std::int64_t>() <= -1000)) {
    out.insert(canonical_string(v));
  }
}

Observation to_observation(const Value& v) {
  if (v.is_object() || v.is_array()) {
    if (!v.empty()) return Observation::from_json(v);
  }
  return Observation::success(Value{{"result", v}});
}

}  // namespace

DatasetSample cfb_to_sample(const Value& record) {
  const CfbRecord r = read_record(record);
  if (r.turns.empty()) throw SchemaError("record '" + r.id + "' has no function calls");
  DatasetSample s;
  s.id = r.id;
  s.query = r.query.empty() ? "(no user query)" : r.query;
  s.provenance.template_id = "complexfuncbench";
  s.provenance.generator_id = "complexfuncbench";
  if (record.contains("logic") && record["logic"].is_string()) s.provenance.logic = record["logic"].get<std::string>();

  GroundTruth& gt = s.ground_truth;
  gt.template_id = "complexfuncbench";
  std::vector<std::set<std::string>> produced;  // scalar values seen in each call's response
  std::vector<int> call_turn;
  for (std::size_t t = 0; t < r.turns.size(); ++t) {
    const auto& turn = r.turns[t];
    const std::size_t first_in_turn = gt.calls.size();
    for (std::size_t k = 0; k < turn.calls.size(); ++k) {
      GroundTruth::Call c;
      c.turn = static_cast<int>(t) + 1;
      c.call = turn.calls[k];
      const std::size_t me = gt.calls.size();
      for (auto it = c.call.args.begin(); it != c.call.args.end(); ++it) {
        const std::string canon = canonical_string(it.value());
        bool bound = false;
        for (std::size_t j = 0; j < first_in_turn; ++j) {
          if (produced[j].count(canon)) {
            gt.edges.emplace_back(j, me);
            bound = true;
          }
        }
        if (bound) c.dependency_params.push_back(it.key());
      }
      gt.calls.push_back(std::move(c));
      std::set<std::string> values;
      if (k < turn.responses.size()) collect_scalars(turn.responses[k], values);
      produced.push_back(std::move(values));
    }
  }
  std::sort(gt.edges.begin(), gt.edges.end());
  gt.edges.erase(std::unique(gt.edges.begin(), gt.edges.end()), gt.edges.end());
  gt.validate();
  return s;
}

std::vector<DatasetSample> load_cfb_dataset(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot open " + file.string());
  std::vector<DatasetSample> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(cfb_to_sample(Value::parse(line)));
    } catch (const Value::exception& e) {
      throw SchemaError(file.string() + " line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

Prediction cfb_to_prediction(const Value& record) {
  const CfbRecord r = read_record(record);
  Prediction p;
  p.sample_id = r.id;
  std::vector<Observation> obs;
  bool complete = true;
  for (const auto& t : r.turns) {
    p.turns.push_back(t.calls);
    if (t.responses.size() != t.calls.size()) complete = false;
    for (const auto& resp : t.responses) obs.push_back(to_observation(resp));
  }
  if (complete) p.observations = std::move(obs);
  return p;
}

}  // namespace toolgym

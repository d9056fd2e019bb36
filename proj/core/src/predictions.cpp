#include "toolgym/predictions.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "toolgym/complexfuncbench.hpp"
#include "toolgym/errors.hpp"

namespace toolgym {

Value Prediction::to_json() const {
  Value doc{{"sample_id", sample_id}};
  if (!messages.empty()) {
    doc["messages"] = messages;
  } else {
    Value ts = Value::array();
    for (const auto& turn : turns) {
      Value t = Value::array();
      for (const auto& c : turn) t.push_back(c.to_json());
      ts.push_back(std::move(t));
    }
    doc["turns"] = std::move(ts);
  }
  if (observations) {
    Value os = Value::array();
    for (const auto& o : *observations) os.push_back(o.to_json());
    doc["observations"] = std::move(os);
  }
  return doc;
}

Prediction Prediction::from_json(const Value& doc) {
  if (!doc.is_object() || !doc.contains("sample_id")) throw SchemaError("prediction needs a 'sample_id'");
  Prediction p;
  p.sample_id = doc["sample_id"].get<std::string>();
  if (doc.contains("messages")) {
    p.messages = doc["messages"].get<std::vector<std::string>>();
  } else if (doc.contains("turns")) {
    for (const auto& t : doc["turns"]) {
      std::vector<ToolCall> turn;
      for (const auto& c : t) turn.push_back(ToolCall::from_json(c));
      p.turns.push_back(std::move(turn));
    }
  } else {
    throw SchemaError("prediction '" + p.sample_id + "' needs 'turns' or 'messages'");
  }
  if (doc.contains("observations")) {
    std::vector<Observation> obs;
    for (const auto& o : doc["observations"]) obs.push_back(Observation::from_json(o));
    p.observations = std::move(obs);
  }
  return p;
}

std::vector<Prediction> read_predictions(std::istream& in) {
  std::vector<Prediction> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const Value doc = Value::parse(line);
      out.push_back(doc.contains("conversations") ? cfb_to_prediction(doc) : Prediction::from_json(doc));
    } catch (const Value::exception& e) {
      throw SchemaError("predictions line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<Prediction> load_predictions(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot open predictions " + file.string());
  return read_predictions(in);
}

void write_predictions(std::ostream& out, const std::vector<Prediction>& predictions) {
  for (const auto& p : predictions) out << canonical_string(p.to_json()) << '\n';
}

ResolvedTranscript resolve_prediction(const Prediction& p, const DatasetSample& sample, const Environment* env,
                                      int max_turns) {
  ResolvedTranscript r;
  if (!p.messages.empty()) {
    if (env == nullptr) throw Error("raw assistant messages need an environment to roll out");
    Episode ep(*env, sample, max_turns);
    for (const auto& m : p.messages) {
      if (ep.closed()) break;
      ep.step(m);
    }
    r.turns = ep.predicted_turns();
    r.calls = ep.predicted_calls();
    r.observations = ep.observations();
    return r;
  }
  r.turns = p.turns;
  for (const auto& t : p.turns) r.calls.insert(r.calls.end(), t.begin(), t.end());
  if (p.observations) {
    r.observations = *p.observations;
  } else if (env != nullptr) {
    for (const auto& c : r.calls) r.observations.push_back(env->execute(c));
  }
  return r;
}

Prediction prediction_from_episode(const Episode& episode) {
  Prediction p;
  p.sample_id = episode.sample().id;
  p.turns = episode.predicted_turns();
  p.observations = episode.observations();
  return p;
}

}  // namespace toolgym

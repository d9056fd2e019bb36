#include "toolgym/reward.hpp"

#include <stdexcept>

namespace toolgym {

std::size_t AlignmentMap::assigned() const noexcept {
  std::size_t n = 0;
  for (const auto& m : gt_to_pred) n += m.has_value();
  return n;
}

Value AlignmentMap::to_json() const {
  Value out = Value::array();
  for (const auto& m : gt_to_pred) out.push_back(m ? Value(*m) : Value(nullptr));
  return out;
}

double RewardReport::mean_ast() const noexcept {
  if (per_call.empty()) return 0.0;
  double s = 0.0;
  for (const auto& c : per_call) s += c.ast;
  return s / static_cast<double>(per_call.size());
}

double RewardReport::mean_sem() const noexcept {
  if (per_call.empty()) return 0.0;
  double s = 0.0;
  for (const auto& c : per_call) s += c.sem;
  return s / static_cast<double>(per_call.size());
}

Value RewardReport::to_json() const {
  Value calls = Value::array();
  for (const auto& c : per_call) calls.push_back(Value{{"ast", c.ast}, {"sem", c.sem}});
  return Value{{"per_call", std::move(calls)}, {"mean_ast", mean_ast()}, {"mean_sem", mean_sem()},
               {"r_atomic", r_atomic},        {"r_orch", r_orch},       {"r_total", r_total},
               {"lambda", lambda},            {"alignment", alignment.to_json()}};
}

double struct_score(const Value& pred_args, const Value& gt_args) {
  if (!gt_args.is_object() || gt_args.empty()) return 1.0;
  if (!pred_args.is_object()) return 0.0;
  std::size_t shared = 0;
  std::size_t type_correct = 0;
  for (auto it = gt_args.begin(); it != gt_args.end(); ++it) {
    auto p = pred_args.find(it.key());
    if (p == pred_args.end()) continue;
    ++shared;
    if (value_type(*p) == value_type(it.value())) ++type_correct;
  }
  if (shared == 0) return 0.0;
  const double coverage = static_cast<double>(shared) / static_cast<double>(gt_args.size());
  const double type_accuracy = static_cast<double>(type_correct) / static_cast<double>(shared);
  return coverage * type_accuracy;
}

double score_ast(const ToolCall& pred, const ToolCall* gt, const AstWeights& w) {
  if (gt == nullptr) return 0.0;
  const double name = pred.function == gt->function ? 1.0 : 0.0;
  const double exact = canonical_equal(pred.args, gt->args) ? 1.0 : 0.0;
  return w.name * name + w.structure * struct_score(pred.args, gt->args) + w.value * exact;
}

namespace {

bool failure_status(const Value& status) {
  if (status.is_boolean()) return !status.get<bool>();
  if (status.is_string()) {
    const auto& s = status.get_ref<const std::string&>();
    return s == "error" || s == "failure" || s == "failed" || s == "fail";
  }
  return false;
}

bool has_error_indicator(const Value& payload) {
  if (!payload.is_object()) return false;
  if (auto e = payload.find("error"); e != payload.end() && !e->is_null() && *e != false) return true;
  if (auto e = payload.find("errors"); e != payload.end() && !e->is_null() && !e->empty()) return true;
  if (auto s = payload.find("status"); s != payload.end() && failure_status(*s)) return true;
  if (auto s = payload.find("success"); s != payload.end() && s->is_boolean() && !s->get<bool>()) return true;
  return false;
}

}  // namespace

int score_semantic(const Observation* obs, const FunctionSchema* schema) {
  if (obs == nullptr || obs->is_error()) return 0;
  const Value& payload = obs->payload();
  if (!(payload.is_object() || payload.is_array()) || payload.empty()) return 0;
  if (has_error_indicator(payload)) return 0;
  if (schema != nullptr && payload.is_object()) {
    for (const auto& field : schema->response_fields) {
      if (!payload.contains(field)) return 0;
    }
  }
  return 1;
}

AlignmentMap align_calls(std::span<const ToolCall> pred, std::span<const ToolCall> gt) {
  AlignmentMap m;
  m.gt_to_pred.assign(gt.size(), std::nullopt);
  m.pred_to_gt.assign(pred.size(), std::nullopt);
  for (std::size_t i = 0; i < gt.size(); ++i) {
    for (std::size_t k = 0; k < pred.size(); ++k) {
      if (!m.pred_to_gt[k] && pred[k].function == gt[i].function) {
        m.gt_to_pred[i] = k;
        m.pred_to_gt[k] = i;
        break;
      }
    }
  }
  return m;
}

double score_atomic(std::span<const ToolCall> pred, std::span<const ToolCall> gt,
                    std::span<const Observation> observations, const AlignmentMap& alignment,
                    const Registry* registry, std::vector<CallScore>* per_call, const AstWeights& weights) {
  if (alignment.pred_to_gt.size() != pred.size()) throw std::invalid_argument("alignment does not match prediction");
  if (per_call) per_call->clear();
  if (pred.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < pred.size(); ++k) {
    const auto& paired = alignment.pred_to_gt[k];
    const double ast = score_ast(pred[k], paired ? &gt[*paired] : nullptr, weights);
    const Observation* obs = k < observations.size() ? &observations[k] : nullptr;
    const FunctionSchema* schema = registry ? registry->find(pred[k].function) : nullptr;
    const int sem = score_semantic(obs, schema);
    if (per_call) per_call->push_back({ast, sem});
    sum += (ast + sem) / 2.0;
  }
  return sum / static_cast<double>(pred.size());
}

double score_orch(const AlignmentMap& alignment, std::size_t gt_count, std::span<const Edge> edges) {
  if (gt_count == 0) return 0.0;
  const auto& mu = alignment.gt_to_pred;
  std::size_t credited = 0;
  for (std::size_t i = 0; i < gt_count; ++i) {
    if (!mu.at(i)) continue;
    bool gate = true;
    for (const auto& [from, to] : edges) {
      if (to != i) continue;
      if (!mu.at(from) || !(*mu[from] < *mu[i])) {
        gate = false;
        break;
      }
    }
    credited += gate;
  }
  return static_cast<double>(credited) / static_cast<double>(gt_count);
}

RewardReport score_total(std::span<const ToolCall> pred, const GroundTruth& gt,
                         std::span<const Observation> observations, double lambda, const Registry* registry,
                         const AstWeights& weights) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0, 1]");
  const std::vector<ToolCall> gt_calls = gt.tool_calls();
  RewardReport r;
  r.lambda = lambda;
  r.alignment = align_calls(pred, gt_calls);
  r.r_atomic = score_atomic(pred, gt_calls, observations, r.alignment, registry, &r.per_call, weights);
  r.r_orch = score_orch(r.alignment, gt_calls.size(), gt.edges);
  r.r_total = lambda * r.r_atomic + (1.0 - lambda) * r.r_orch;
  return r;
}

}  // namespace toolgym

#include "toolgym/evaluator.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "toolgym/reward.hpp"

namespace toolgym {

bool match_call(const ToolCall& pred, const ToolCall& gt) {
  return pred.function == gt.function && canonical_equal(pred.args, gt.args);
}

Ratio turn_accuracy(std::span<const std::vector<ToolCall>> pred_turns, const GroundTruth& gt) {
  const auto turns = gt.turns();
  Ratio r{0, turns.size()};
  for (std::size_t t = 0; t < turns.size() && t < pred_turns.size(); ++t) {
    const auto& predicted = pred_turns[t];
    std::vector<bool> used(predicted.size(), false);
    bool ok = true;
    for (auto gi : turns[t]) {
      bool found = false;
      for (std::size_t k = 0; k < predicted.size(); ++k) {
        if (!used[k] && match_call(predicted[k], gt.calls[gi].call)) {
          used[k] = found = true;
          break;
        }
      }
      if (!found) {
        ok = false;
        break;
      }
    }
    if (!ok) break;
    ++r.num;
  }
  return r;
}

Ratio call_accuracy(std::span<const ToolCall> pred, const GroundTruth& gt) {
  Ratio r{0, gt.calls.size()};
  std::vector<bool> used(gt.calls.size(), false);
  for (const auto& p : pred) {
    for (std::size_t i = 0; i < gt.calls.size(); ++i) {
      if (!used[i] && match_call(p, gt.calls[i].call)) {
        used[i] = true;
        ++r.num;
        break;
      }
    }
  }
  return r;
}

std::string_view to_string(DependencyPattern p) noexcept {
  return p == DependencyPattern::kLinear ? "linear" : "fan_out";
}

Stratum stratify(std::size_t n, std::span<const Edge> edges, std::string_view logic) {
  Stratum s;
  s.logic = std::string(logic);
  std::vector<std::size_t> children(n, 0), parents(n, 0);
  std::vector<std::vector<std::size_t>> preds(n);
  for (auto [from, to] : edges) {
    if (from >= n || to >= n) continue;
    ++children[from];
    ++parents[to];
    preds[to].push_back(from);
  }
  // Edges always point forward (prerequisite index < dependent index).
  std::vector<int> longest(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto p : preds[i]) longest[i] = std::max(longest[i], longest[p] + 1);
    s.depth = std::max(s.depth, longest[i]);
  }
  const auto roots = static_cast<std::size_t>(std::count(parents.begin(), parents.end(), 0));
  const bool branching = std::any_of(children.begin(), children.end(), [](auto c) { return c >= 2; });
  s.pattern = (branching || roots >= 2) ? DependencyPattern::kFanOut : DependencyPattern::kLinear;
  return s;
}

Stratum stratify(const DatasetSample& sample) {
  return stratify(sample.ground_truth.calls.size(), sample.ground_truth.edges, sample.provenance.logic);
}

ErrorCounts& ErrorCounts::operator+=(const ErrorCounts& o) noexcept {
  produced_calls += o.produced_calls;
  function_selection_err += o.function_selection_err;
  parameter_err += o.parameter_err;
  correct_function_calls += o.correct_function_calls;
  query_param_err += o.query_param_err;
  dependency_param_err += o.dependency_param_err;
  samples += o.samples;
  incomplete += o.incomplete;
  stopped_after_correct += o.stopped_after_correct;
  stopped_after_func_err += o.stopped_after_func_err;
  stopped_after_param_err += o.stopped_after_param_err;
  stopped_without_calls += o.stopped_without_calls;
  return *this;
}

namespace {

double rate(std::size_t num, std::size_t den) { return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den); }

enum class CallVerdict { kCorrect, kFunctionError, kParamError };

}  // namespace

ErrorBreakdown ErrorBreakdown::from_counts(const ErrorCounts& c) noexcept {
  ErrorBreakdown b;
  b.function_selection_err = rate(c.function_selection_err, c.produced_calls);
  b.parameter_err = rate(c.parameter_err, c.produced_calls);
  b.query_param_err = rate(c.query_param_err, c.correct_function_calls);
  b.dependency_param_err = rate(c.dependency_param_err, c.correct_function_calls);
  b.stopped_after_correct = rate(c.stopped_after_correct, c.samples);
  b.stopped_after_func_err = rate(c.stopped_after_func_err, c.samples);
  b.stopped_after_param_err = rate(c.stopped_after_param_err, c.samples);
  b.stopped_without_calls = rate(c.stopped_without_calls, c.samples);
  return b;
}

Value ErrorBreakdown::to_json() const {
  return Value{{"call_level", {{"function_selection_err", function_selection_err}, {"parameter_err", parameter_err}}},
               {"parameter_level", {{"query_param_err", query_param_err}, {"dependency_param_err", dependency_param_err}}},
               {"sequence_level",
                {{"stopped_after_correct", stopped_after_correct},
                 {"stopped_after_func_err", stopped_after_func_err},
                 {"stopped_after_param_err", stopped_after_param_err},
                 {"stopped_without_calls", stopped_without_calls}}}};
}

ErrorCounts classify_errors(std::span<const std::vector<ToolCall>> pred_turns, const GroundTruth& gt) {
  ErrorCounts c;
  c.samples = 1;
  std::vector<ToolCall> pred;
  for (const auto& turn : pred_turns) pred.insert(pred.end(), turn.begin(), turn.end());
  const std::vector<ToolCall> gt_calls = gt.tool_calls();
  const AlignmentMap mu = align_calls(pred, gt_calls);

  std::vector<CallVerdict> verdicts;
  verdicts.reserve(pred.size());
  for (std::size_t k = 0; k < pred.size(); ++k) {
    ++c.produced_calls;
    std::optional<std::size_t> ref = mu.pred_to_gt[k];
    if (!ref) {
      for (std::size_t i = 0; i < gt_calls.size(); ++i) {
        if (gt_calls[i].function == pred[k].function) {
          ref = i;
          break;
        }
      }
    }
    if (!ref) {
      ++c.function_selection_err;
      verdicts.push_back(CallVerdict::kFunctionError);
      continue;
    }
    ++c.correct_function_calls;
    const ToolCall& g = gt_calls[*ref];
    if (match_call(pred[k], g)) {
      verdicts.push_back(CallVerdict::kCorrect);
      continue;
    }
    ++c.parameter_err;
    verdicts.push_back(CallVerdict::kParamError);
    std::set<std::string> names;
    for (auto it = g.args.begin(); it != g.args.end(); ++it) names.insert(it.key());
    for (auto it = pred[k].args.begin(); it != pred[k].args.end(); ++it) names.insert(it.key());
    bool query_wrong = false, dependency_wrong = false;
    for (const auto& name : names) {
      auto p = pred[k].args.find(name);
      auto q = g.args.find(name);
      const bool same = p != pred[k].args.end() && q != g.args.end() && canonical_equal(*p, *q);
      if (same) continue;
      if (gt.is_dependency_param(*ref, name)) {
        dependency_wrong = true;
      } else {
        query_wrong = true;
      }
    }
    c.query_param_err += query_wrong;
    c.dependency_param_err += dependency_wrong;
  }

  const Ratio turns = turn_accuracy(pred_turns, gt);
  if (turns.num < turns.den) {
    ++c.incomplete;
    if (verdicts.empty()) {
      ++c.stopped_without_calls;
    } else {
      switch (verdicts.back()) {
        case CallVerdict::kCorrect:
          ++c.stopped_after_correct;
          break;
        case CallVerdict::kFunctionError:
          ++c.stopped_after_func_err;
          break;
        case CallVerdict::kParamError:
          ++c.stopped_after_param_err;
          break;
      }
    }
  }
  return c;
}

Value EvalReport::to_json() const {
  Value strata_doc = Value::object();
  for (const auto& [label, st] : strata) {
    strata_doc[label] = Value{{"count", st.count}, {"turn_acc", st.turns.value()}, {"n_succ", st.turns.num},
                              {"n_total", st.turns.den}};
  }
  return Value{{"samples", samples},
               {"turn_acc", turn_acc()},
               {"call_acc", call_acc()},
               {"n_succ", turns.num},
               {"n_turns", turns.den},
               {"matched_calls", calls.num},
               {"total_calls", calls.den},
               {"strata", std::move(strata_doc)},
               {"errors", errors().to_json()}};
}

std::string EvalReport::table() const {
  std::string out;
  char line[160];
  auto pct = [](double v) { return v * 100.0; };
  std::snprintf(line, sizeof(line), "%-32s %8s\n", "Metric", "Value");
  out += line;
  std::snprintf(line, sizeof(line), "%-32s %8zu\n", "Samples", samples);
  out += line;
  std::snprintf(line, sizeof(line), "%-32s %7.1f%%\n", "Turn Acc", pct(turn_acc()));
  out += line;
  std::snprintf(line, sizeof(line), "%-32s %7.1f%%\n", "Call Acc", pct(call_acc()));
  out += line;
  out += "\nStratum                          Count  Turn Acc\n";
  for (const auto& [label, st] : strata) {
    std::snprintf(line, sizeof(line), "%-32s %5zu  %7.1f%%\n", label.c_str(), st.count, pct(st.turns.value()));
    out += line;
  }
  const ErrorBreakdown e = errors();
  out += "\nError Type (%)\n";
  const std::pair<const char*, double> rows[] = {
      {"Call-Level (among produced calls)", -1},
      {"  Function Selection Err", e.function_selection_err},
      {"  Parameter Err", e.parameter_err},
      {"Parameter-Level (given correct function)", -1},
      {"  Query Param Err", e.query_param_err},
      {"  Dependency Param Err", e.dependency_param_err},
      {"Sequence-Level (incomplete breakdown)", -1},
      {"  Stopped after Correct", e.stopped_after_correct},
      {"  Stopped after Func Err", e.stopped_after_func_err},
      {"  Stopped after Param Err", e.stopped_after_param_err},
      {"  Stopped without Calls", e.stopped_without_calls},
  };
  for (const auto& [name, v] : rows) {
    if (v < 0) {
      std::snprintf(line, sizeof(line), "%s\n", name);
    } else {
      std::snprintf(line, sizeof(line), "%-42s %6.1f\n", name, pct(v));
    }
    out += line;
  }
  return out;
}

void Evaluator::add(const DatasetSample& sample, std::span<const std::vector<ToolCall>> pred_turns) {
  const GroundTruth& gt = sample.ground_truth;
  std::vector<ToolCall> flat;
  for (const auto& t : pred_turns) flat.insert(flat.end(), t.begin(), t.end());
  const Ratio turns = turn_accuracy(pred_turns, gt);
  ++report_.samples;
  report_.turns += turns;
  report_.calls += call_accuracy(flat, gt);
  report_.error_counts += classify_errors(pred_turns, gt);

  const Stratum s = stratify(sample);
  auto bump = [&](const std::string& label) {
    auto& st = report_.strata[label];
    ++st.count;
    st.turns += turns;
  };
  bump("depth=" + std::to_string(s.depth));
  bump("pattern=" + std::string(to_string(s.pattern)));
  if (!s.logic.empty()) bump("logic=" + s.logic);
}

}  // namespace toolgym

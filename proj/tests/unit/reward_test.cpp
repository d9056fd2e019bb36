#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "random_pairs.hpp"
#include "reward_oracle.hpp"
#include "test_support.hpp"
#include "toolgym/predictions.hpp"
#include "toolgym/reward.hpp"

using namespace toolgym;

namespace {

std::vector<ToolCall> gt_calls(const DatasetSample& s) { return s.ground_truth.tool_calls(); }

std::vector<Observation> run(const Environment& env, const std::vector<ToolCall>& calls) {
  std::vector<Observation> out;
  for (const auto& c : calls) out.push_back(env.execute(c));
  return out;
}

}  // namespace

TEST(StructScore, Examples) {
  EXPECT_DOUBLE_EQ(struct_score(Value{{"a", 1}, {"b", "x"}}, Value{{"a", 2}, {"b", "y"}, {"c", 3.0}}), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(struct_score(Value{{"a", 1}}, Value{{"a", 1}}), 1.0);
  EXPECT_DOUBLE_EQ(struct_score(Value{{"x", 1}}, Value{{"a", 1}}), 0.0);
  EXPECT_DOUBLE_EQ(struct_score(Value{{"x", 1}}, Value::object()), 1.0);
  EXPECT_DOUBLE_EQ(struct_score(Value{{"a", 1}, {"b", 1.0}}, Value{{"a", 1}, {"b", 1}}), 0.5);
  EXPECT_DOUBLE_EQ(struct_score(Value{{"a", 1}, {"z", 1}}, Value{{"a", 1}}), 1.0);
}

TEST(AstScore, Levels) {
  const ToolCall gt("Search_Car_Rentals", Value{{"pick_up_date", "2024-10-31"}, {"pick_up_time", "10:00"}});
  EXPECT_DOUBLE_EQ(score_ast(gt, &gt), 1.0);
  const ToolCall one_wrong("Search_Car_Rentals", Value{{"pick_up_date", "2024-11-01"}, {"pick_up_time", "10:00"}});
  EXPECT_NEAR(score_ast(one_wrong, &gt), 2.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(score_ast(ToolCall("Other", gt.args), nullptr), 0.0);
}

TEST(SemanticScore, ExecutionBased) {
  EXPECT_EQ(score_semantic(nullptr), 0);
  const Observation ok = Observation::success(Value{{"hotels", Value::array({1})}});
  EXPECT_EQ(score_semantic(&ok), 1);
  const Observation miss = Observation::failure(ErrorCode::kCacheMiss, "no");
  EXPECT_EQ(score_semantic(&miss), 0);
  const Observation failed = Observation::success(Value{{"status", "error"}, {"data", 1}});
  EXPECT_EQ(score_semantic(&failed), 0);
  const Observation empty = Observation::success(Value::array());
  EXPECT_EQ(score_semantic(&empty), 0);
  FunctionSchema s;
  s.response_fields = {"hotels"};
  const Observation wrong_shape = Observation::success(Value{{"cars", 1}});
  EXPECT_EQ(score_semantic(&wrong_shape, &s), 0);
  EXPECT_EQ(score_semantic(&ok, &s), 1);
}

TEST(SemanticScore, DifferentButValidCallStillScores) {
  const auto env = testing_support::env_from("montreal_cache.jsonl");
  const auto sample = testing_support::montreal_sample();
  // Executes fine but is not the ground-truth step it gets aligned to.
  const std::vector<ToolCall> pred{sample.ground_truth.calls[1].call};
  const auto obs = run(*env, pred);
  const RewardReport r = score_total(pred, sample.ground_truth, obs, 0.5, testing_support::registry().get());
  EXPECT_EQ(r.per_call[0].sem, 1);
}

TEST(Align, IdentityAndMontrealZeroShot) {
  const auto sample = testing_support::montreal_sample();
  const auto gt = gt_calls(sample);
  const AlignmentMap id = align_calls(gt, gt);
  for (std::size_t i = 0; i < gt.size(); ++i) EXPECT_EQ(id.gt_to_pred[i], i);

  const auto preds = load_predictions(testing_support::fixture("montreal_zero_shot.predictions.jsonl"));
  std::vector<ToolCall> flat;
  for (const auto& turn : preds.at(0).turns) flat.insert(flat.end(), turn.begin(), turn.end());
  const AlignmentMap m = align_calls(flat, gt);
  EXPECT_EQ(m.assigned(), 2u);
  EXPECT_FALSE(m.gt_to_pred[0].has_value());
  EXPECT_FALSE(m.gt_to_pred[2].has_value());
}

TEST(Align, DuplicateNameGoesToFirstGroundTruthCall) {
  const std::vector<ToolCall> gt{ToolCall("A", Value{{"x", 1}}), ToolCall("A", Value{{"x", 2}})};
  const std::vector<ToolCall> pred{ToolCall("A", Value{{"x", 2}})};
  const AlignmentMap m = align_calls(pred, gt);
  EXPECT_EQ(m.gt_to_pred[0], 0u);
  EXPECT_FALSE(m.gt_to_pred[1].has_value());
}

TEST(Align, ExhaustiveSmallSequencesMatchOracle) {
  // Every name sequence over {A,B,C} of length up to 4, on both sides.
  std::vector<std::vector<std::string>> seqs{{}};
  for (std::size_t len = 1; len <= 4; ++len) {
    std::vector<std::string> cur(len);
    std::function<void(std::size_t)> rec = [&](std::size_t pos) {
      if (pos == len) {
        seqs.push_back(cur);
        return;
      }
      for (const char* n : {"A", "B", "C"}) {
        cur[pos] = n;
        rec(pos + 1);
      }
    };
    rec(0);
  }
  std::size_t checked = 0;
  for (const auto& g : seqs) {
    std::vector<ToolCall> gt;
    std::vector<oracle::Call> ogt;
    for (const auto& n : g) gt.emplace_back(n, Value::object()), ogt.push_back({n, oracle::json::object()});
    for (const auto& p : seqs) {
      std::vector<ToolCall> pred;
      std::vector<oracle::Call> opred;
      for (const auto& n : p) pred.emplace_back(n, Value::object()), opred.push_back({n, oracle::json::object()});
      const auto want = oracle::first_match(opred, ogt);
      const AlignmentMap got = align_calls(pred, gt);
      ASSERT_EQ(got.gt_to_pred, want);
      for (std::size_t i = 0; i < want.size(); ++i) {
        if (want[i]) ASSERT_EQ(got.pred_to_gt[*want[i]], i);
      }
      ++checked;
    }
  }
  EXPECT_EQ(checked, 121u * 121u);
}

TEST(Atomic, PerfectReplayAndEmpty) {
  const auto env = testing_support::env_from("car_rental_cache.jsonl");
  const auto sample = testing_support::car_rental_sample();
  const auto gt = gt_calls(sample);
  const RewardReport r = score_total(gt, sample.ground_truth, run(*env, gt), 0.5, testing_support::registry().get());
  EXPECT_DOUBLE_EQ(r.r_atomic, 1.0);
  EXPECT_DOUBLE_EQ(r.r_orch, 1.0);
  EXPECT_DOUBLE_EQ(r.r_total, 1.0);
  const RewardReport e = score_total({}, sample.ground_truth, {});
  EXPECT_DOUBLE_EQ(e.r_atomic, 0.0);
  EXPECT_DOUBLE_EQ(e.r_orch, 0.0);
}

TEST(Atomic, ExtraExecutableCall) {
  const auto env = testing_support::env_from("car_rental_cache.jsonl");
  const auto sample = testing_support::car_rental_sample();
  auto pred = gt_calls(sample);
  auto obs = run(*env, pred);
  pred.emplace_back("Search_Hotels", Value{{"dest_id", "-1"}});
  obs.push_back(Observation::success(Value{{"hotels", Value::array({1})}}));
  const RewardReport r = score_total(pred, sample.ground_truth, obs);
  EXPECT_DOUBLE_EQ(r.r_atomic, 0.875);
}

TEST(Orch, SwappedAndZeroShot) {
  const auto sample = testing_support::car_rental_sample();
  const auto gt = gt_calls(sample);
  const auto edges = sample.ground_truth.edges;
  EXPECT_DOUBLE_EQ(score_orch(align_calls(gt, gt), 3, edges), 1.0);
  const std::vector<ToolCall> swapped{gt[0], gt[2], gt[1]};
  EXPECT_NEAR(score_orch(align_calls(swapped, gt), 3, edges), 2.0 / 3.0, 1e-15);

  const auto m = testing_support::montreal_sample();
  const std::vector<ToolCall> hotel_branch{m.ground_truth.calls[1].call, m.ground_truth.calls[3].call};
  EXPECT_DOUBLE_EQ(score_orch(align_calls(hotel_branch, gt_calls(m)), 4, m.ground_truth.edges), 0.5);
}

TEST(Total, LambdaEndpoints) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 100; ++i) {
    const auto c = testing_support::random_pair(rng);
    const auto r1 = score_total(c.pred, c.gt, c.observations, 1.0);
    const auto r0 = score_total(c.pred, c.gt, c.observations, 0.0);
    EXPECT_EQ(r1.r_total, r1.r_atomic);
    EXPECT_EQ(r0.r_total, r0.r_orch);
    const auto r = score_total(c.pred, c.gt, c.observations, 0.3);
    EXPECT_EQ(r.r_total, 0.3 * r.r_atomic + (1 - 0.3) * r.r_orch);
  }
}

TEST(Total, AgreesWithDirectFormulaOracle) {
  std::mt19937_64 rng(500);
  const Registry& reg = testing_support::random_registry();
  for (int i = 0; i < 500; ++i) {
    const auto c = testing_support::random_pair(rng);
    const double lambda = static_cast<double>(rng() % 11) / 10.0;
    const RewardReport r = score_total(c.pred, c.gt, c.observations, lambda, &reg);
    const oracle::Scores o = oracle::evaluate(c.o_pred, c.o_gt, c.o_edges, c.o_outcomes, c.o_fields, lambda);
    ASSERT_NEAR(r.r_atomic, o.atomic, 1e-9) << "pair " << i;
    ASSERT_NEAR(r.r_orch, o.orch, 1e-9) << "pair " << i;
    ASSERT_NEAR(r.r_total, o.total, 1e-9) << "pair " << i;
    ASSERT_EQ(r.per_call.size(), o.ast.size());
    for (std::size_t k = 0; k < o.ast.size(); ++k) {
      ASSERT_NEAR(r.per_call[k].ast, o.ast[k], 1e-9);
      ASSERT_EQ(r.per_call[k].sem, o.sem[k]);
    }
  }
}

TEST(Properties, Bounded) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 2000; ++i) {
    const auto c = testing_support::random_pair(rng);
    const auto r = score_total(c.pred, c.gt, c.observations, static_cast<double>(rng() % 101) / 100.0);
    for (double v : {r.r_atomic, r.r_orch, r.r_total}) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
    }
    for (const auto& pc : r.per_call) {
      ASSERT_GE(pc.ast, 0.0);
      ASSERT_LE(pc.ast, 1.0);
    }
  }
}

TEST(Properties, FixingATypeNeverLowersAst) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 2000; ++i) {
    Value gt_args = testing_support::random_args(rng);
    if (gt_args.empty()) continue;
    Value pred_args = testing_support::perturb(gt_args, rng);
    for (auto it = gt_args.begin(); it != gt_args.end(); ++it) {
      if (!pred_args.contains(it.key())) continue;
      const Value before = pred_args[it.key()];
      Value wrong = pred_args, right = pred_args;
      wrong[it.key()] = it->is_string() ? Value(7) : Value("seven");
      right[it.key()] = *it;
      const ToolCall gt("F", gt_args);
      ASSERT_LE(score_ast(ToolCall("F", wrong), &gt), score_ast(ToolCall("F", right), &gt) + 1e-15);
    }
  }
}

TEST(Properties, MissingPrerequisiteZeroesDependents) {
  std::mt19937_64 rng(3);
  int exercised = 0;
  for (int i = 0; i < 2000; ++i) {
    auto c = testing_support::random_pair(rng);
    if (c.gt.edges.empty()) continue;
    const auto [pre, dep] = c.gt.edges[rng() % c.gt.edges.size()];
    // Drop every predicted call that could align to the prerequisite's name.
    std::vector<ToolCall> pred;
    for (const auto& p : c.pred) {
      if (p.function != c.gt.calls[pre].call.function) pred.push_back(p);
    }
    const auto gt = c.gt.tool_calls();
    const AlignmentMap m = align_calls(pred, gt);
    const double with = score_orch(m, gt.size(), c.gt.edges);
    std::vector<Edge> without_dep_edges;
    for (const auto& e : c.gt.edges) {
      if (e.second != dep) without_dep_edges.push_back(e);
    }
    // Without its gate the dependent earns exactly [matched]; the difference isolates its gated credit.
    const double ungated = score_orch(m, gt.size(), without_dep_edges);
    const double dep_credit_gated = with - (ungated - (m.gt_to_pred[dep] ? 1.0 : 0.0) / gt.size());
    EXPECT_NEAR(dep_credit_gated, 0.0, 1e-12);
    ++exercised;
  }
  EXPECT_GT(exercised, 500);
}

TEST(Properties, SwappingUnrelatedAdjacentCallsKeepsOrch) {
  std::mt19937_64 rng(4);
  int exercised = 0;
  for (int i = 0; i < 3000; ++i) {
    const auto c = testing_support::random_pair(rng);
    if (c.pred.size() < 2) continue;
    const std::size_t k = rng() % (c.pred.size() - 1);
    if (c.pred[k].function == c.pred[k + 1].function) continue;
    const auto gt = c.gt.tool_calls();
    const AlignmentMap m = align_calls(c.pred, gt);
    const auto a = m.pred_to_gt[k], b = m.pred_to_gt[k + 1];
    bool related = false;
    for (const auto& [x, y] : c.gt.edges) related = related || (a && b && ((x == *a && y == *b) || (x == *b && y == *a)));
    if (related) continue;
    auto swapped = c.pred;
    std::swap(swapped[k], swapped[k + 1]);
    ASSERT_EQ(score_orch(m, gt.size(), c.gt.edges), score_orch(align_calls(swapped, gt), gt.size(), c.gt.edges));
    ++exercised;
  }
  EXPECT_GT(exercised, 500);
}

TEST(Separability, AlignedButFailingAndCorrectButMisordered) {
  const auto sample = testing_support::car_rental_sample();
  const auto gt = gt_calls(sample);
  // Right calls in the right order, none of which execute.
  const std::vector<Observation> failures(3, Observation::failure(ErrorCode::kCacheMiss, "down"));
  const RewardReport a = score_total(gt, sample.ground_truth, failures);
  EXPECT_DOUBLE_EQ(a.r_orch, 1.0);
  EXPECT_LE(a.mean_sem(), 0.5);

  // Exact calls in reverse order: every call scores fully on AST, the chain does not.
  const auto env = testing_support::env_from("car_rental_cache.jsonl");
  const std::vector<ToolCall> reversed{gt[2], gt[1], gt[0]};
  const RewardReport b = score_total(reversed, sample.ground_truth, run(*env, reversed));
  EXPECT_GE(b.mean_ast(), 2.0 / 3.0);
  EXPECT_LT(b.r_orch, 0.5);
}

TEST(Report, JsonFields) {
  const auto sample = testing_support::car_rental_sample();
  const auto gt = gt_calls(sample);
  const Value j = score_total(gt, sample.ground_truth, {}).to_json();
  for (const char* k : {"r_atomic", "r_orch", "r_total", "lambda", "per_call", "alignment", "mean_ast", "mean_sem"})
    EXPECT_TRUE(j.contains(k)) << k;
}

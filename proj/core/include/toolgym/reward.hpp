#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "toolgym/dataset.hpp"
#include "toolgym/schema.hpp"
#include "toolgym/tool_call.hpp"

namespace toolgym {

/// Weights of the three AST levels: function name, parameter structure and
/// types, exact values. They sum to one.
struct AstWeights {
  double name = 1.0 / 3.0;
  double structure = 1.0 / 3.0;
  double value = 1.0 / 3.0;
};

inline constexpr double kDefaultLambda = 0.5;

/// First-match alignment between ground-truth and predicted calls.
struct AlignmentMap {
  std::vector<std::optional<std::size_t>> gt_to_pred;  // mu(i)
  std::vector<std::optional<std::size_t>> pred_to_gt;  // inverse, for pairing R_AST

  std::size_t assigned() const noexcept;
  Value to_json() const;
};

struct CallScore {
  double ast = 0.0;
  int sem = 0;
};

struct RewardReport {
  std::vector<CallScore> per_call;
  double r_atomic = 0.0;
  double r_orch = 0.0;
  double r_total = 0.0;
  double lambda = kDefaultLambda;
  AlignmentMap alignment;

  double mean_ast() const noexcept;
  double mean_sem() const noexcept;
  Value to_json() const;
};

/// Coverage of ground-truth parameter names times type accuracy over the
/// shared names. No expected parameters scores 1; no shared names scores 0.
/// Extra predicted parameters do not lower the score.
double struct_score(const Value& pred_args, const Value& gt_args);

/// Graduated AST score of one call; an unaligned call (gt == nullptr) scores 0.
double score_ast(const ToolCall& pred, const ToolCall* gt, const AstWeights& weights = {});

/// 1 when the call produced a response that carries no error indicator and
/// has a usable payload (non-empty, with the schema's expected top-level
/// fields when the schema lists any). Missing observation scores 0.
int score_semantic(const Observation* obs, const FunctionSchema* schema = nullptr);

/// For each ground-truth call in order, the smallest not-yet-assigned
/// predicted index with the same function name. Argument values are ignored.
AlignmentMap align_calls(std::span<const ToolCall> pred, std::span<const ToolCall> gt);

/// Mean over the K predicted calls of (R_AST + R_sem) / 2; 0 when K == 0.
/// observations[k] is what predicted call k returned.
double score_atomic(std::span<const ToolCall> pred, std::span<const ToolCall> gt,
                    std::span<const Observation> observations, const AlignmentMap& alignment,
                    const Registry* registry = nullptr, std::vector<CallScore>* per_call = nullptr,
                    const AstWeights& weights = {});

/// Fraction of ground-truth calls that are matched and whose every
/// prerequisite is matched at an earlier predicted position.
double score_orch(const AlignmentMap& alignment, std::size_t gt_count, std::span<const Edge> edges);

/// Full report; r_total = lambda * r_atomic + (1 - lambda) * r_orch.
RewardReport score_total(std::span<const ToolCall> pred, const GroundTruth& gt,
                         std::span<const Observation> observations, double lambda = kDefaultLambda,
                         const Registry* registry = nullptr, const AstWeights& weights = {});

}  // namespace toolgym

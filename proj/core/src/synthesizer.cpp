#include "toolgym/synthesizer.hpp"

#include "toolgym/errors.hpp"

namespace toolgym {

SampleOutcome sample_trace(const WorkflowTemplate& tmpl, const CacheStore& store, const InvertedIndex& index,
                           Rng& rng, int max_restarts) {
  SampleOutcome outcome;
  for (int attempt = 0; attempt <= max_restarts; ++attempt) {
    outcome.restarts = attempt;
    Trace trace;
    trace.template_id = tmpl.id;
    trace.pattern = tmpl.pattern;
    bool complete = true;
    for (std::size_t t = 0; t < tmpl.size(); ++t) {
      const std::string& function = tmpl.pattern[t];
      const auto& bindings = tmpl.step(t).args;
      std::vector<EntryId> owned;
      std::span<const EntryId> candidates;
      if (bindings.empty()) {
        candidates = store.ids_for(function);
      } else {
        std::vector<Constraint> constraints;
        for (const auto& [param, dep] : bindings) {
          try {
            constraints.emplace_back(param, extract(dep.from_field, trace.steps.at(dep.from_step).observation));
          } catch (const PathNotFound& e) {
            throw ClosureError(t, "'" + param + "' <- " + render(dep.from_field) + ": " + e.what());
          }
        }
        owned = index.query(function, constraints);
        candidates = owned;
      }
      if (candidates.empty()) {
        complete = false;
        break;
      }
      const CacheEntry& e = store.entry(candidates[rng.below(candidates.size())]);
      TraceStep step{e.call, e.observation, e.id, {}};
      for (const auto& [param, _] : bindings) step.dependency_params.insert(param);
      trace.steps.push_back(std::move(step));
    }
    if (complete) {
      outcome.trace = std::move(trace);
      return outcome;
    }
  }
  outcome.restarts = max_restarts;
  return outcome;
}

bool trace_bindings_hold(const Trace& trace, const WorkflowTemplate& tmpl) {
  if (trace.steps.size() != tmpl.size()) return false;
  for (std::size_t t = 0; t < tmpl.size(); ++t) {
    if (trace.steps[t].call.function != tmpl.pattern[t]) return false;
    for (const auto& [param, dep] : tmpl.step(t).args) {
      const auto& source = trace.steps[dep.from_step].observation;
      if (source.is_error()) return false;
      const auto& args = trace.steps[t].call.args;
      auto it = args.find(param);
      if (it == args.end()) return false;
      try {
        if (!canonical_equal(*it, extract(dep.from_field, source))) return false;
      } catch (const PathNotFound&) {
        return false;
      }
    }
  }
  return true;
}

bool replays_cleanly(const GroundTruth& gt, const Environment& env) {
  for (std::size_t i = 0; i < gt.calls.size(); ++i) {
    const Observation obs = env.execute(gt.calls[i].call);
    if (obs.is_error()) return false;
    if (gt.expected_observations && !(obs == (*gt.expected_observations)[i])) return false;
  }
  return true;
}

std::size_t SynthesisReport::slots() const noexcept {
  std::size_t n = 0;
  for (const auto& [_, s] : templates) n += s.slots;
  return n;
}

std::size_t SynthesisReport::accepted() const noexcept {
  std::size_t n = 0;
  for (const auto& [_, s] : templates) n += s.accepted;
  return n;
}

double SynthesisReport::yield() const noexcept {
  const auto s = slots();
  return s == 0 ? 0.0 : static_cast<double>(accepted()) / static_cast<double>(s);
}

Value SynthesisReport::to_json() const {
  Value per = Value::object();
  for (const auto& [id, s] : templates) {
    per[id] = Value{{"slots", s.slots}, {"accepted", s.accepted}, {"attempts", s.attempts}, {"failures", s.failures}};
  }
  return Value{{"slots", slots()}, {"accepted", accepted()}, {"yield", yield()}, {"templates", std::move(per)}};
}

SynthesisResult synthesize_dataset(std::span<const WorkflowTemplate> templates, const Environment& env,
                                   const InvertedIndex& index, Generator& generator, const SynthesisOptions& options) {
  SynthesisResult result;
  if (options.per_template <= 0) return result;
  for (const auto& tmpl : templates) {
    auto& stats = result.report.templates[tmpl.id];
    for (int slot = 0; slot < options.per_template; ++slot) {
      ++stats.slots;
      const std::uint64_t slot_seed = derive_seed(options.seed, tmpl.id, static_cast<std::uint64_t>(slot));
      Rng rng(slot_seed);
      for (int attempt = 0; attempt < options.attempts_per_slot; ++attempt) {
        ++stats.attempts;
        SampleOutcome outcome;
        try {
          outcome = sample_trace(tmpl, env.store(), index, rng, options.max_restarts);
        } catch (const ClosureError&) {
          ++stats.failures["closure_error"];
          continue;
        }
        if (outcome.exhausted()) {
          ++stats.failures["exhausted"];
          continue;
        }
        Trace& trace = *outcome.trace;
        trace.seed = slot_seed;
        QueryDraft draft;
        try {
          draft = generate_query(trace, generator);
        } catch (const GeneratorError&) {
          ++stats.failures["generator_error"];
          continue;
        }
        if (draft.query.empty()) {
          ++stats.failures["empty_query"];
          continue;
        }
        if (!verify_echo_back(draft, trace)) {
          ++stats.failures["echo_mismatch"];
          continue;
        }
        std::vector<ToolCall> calls;
        std::vector<Observation> observations;
        for (const auto& s : trace.steps) {
          calls.push_back(s.call);
          observations.push_back(s.observation);
        }
        GroundTruth gt = GroundTruth::from_template(tmpl, std::move(calls), std::move(observations));
        if (!replays_cleanly(gt, env)) {
          ++stats.failures["replay_failed"];
          continue;
        }
        DatasetSample sample;
        sample.id = tmpl.id + "-" + std::to_string(slot);
        sample.query = std::move(draft.query);
        sample.ground_truth = std::move(gt);
        sample.provenance = Provenance{tmpl.id, slot_seed, generator.id(), tmpl.logic, tmpl.domain};
        result.samples.push_back(std::move(sample));
        ++stats.accepted;
        break;
      }
    }
  }
  return result;
}

}  // namespace toolgym

#include "toolgym/expand.hpp"

#include "toolgym/errors.hpp"

namespace toolgym {

std::vector<EntryId> expand_workflow(const WorkflowTemplate& tmpl, const Upstream& upstream,
                                     const ArgumentSampler& sampler, CacheBuilder& cache, int breadth,
                                     std::uint64_t seed) {
  std::vector<EntryId> added;
  for (int chain = 0; chain < breadth; ++chain) {
    Rng rng(derive_seed(seed, tmpl.id, static_cast<std::uint64_t>(chain)));
    std::vector<Observation> observations;
    observations.reserve(tmpl.size());
    for (std::size_t step = 0; step < tmpl.size(); ++step) {
      const std::string& function = tmpl.pattern[step];
      Value args = sampler.sample_args(function, rng);
      for (const auto& [param, dep] : tmpl.step(step).args) {
        try {
          args[param] = extract(dep.from_field, observations.at(dep.from_step));
        } catch (const PathNotFound& e) {
          throw ClosureError(step, "'" + param + "' <- step " + std::to_string(dep.from_step) + " " +
                                       render(dep.from_field) + ": " + e.what());
        }
      }
      ToolCall call(function, std::move(args));
      Observation obs = upstream.respond(call, seed);
      if (obs.is_error()) throw UpstreamError(step, obs.error()->message);
      const std::size_t before = cache.size();
      const EntryId id = cache.add(call, obs);
      if (cache.size() > before) added.push_back(id);
      observations.push_back(std::move(obs));
    }
  }
  return added;
}

}  // namespace toolgym

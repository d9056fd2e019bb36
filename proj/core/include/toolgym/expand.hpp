#pragma once

#include <cstdint>
#include <vector>

#include "toolgym/cache_store.hpp"
#include "toolgym/upstream.hpp"
#include "toolgym/workflow_template.hpp"

namespace toolgym {

/// Runs the whole template chain `breadth` times against the upstream and
/// inserts every (call, observation) pair, so each dependent call reachable
/// from a stored observation is itself stored.
///
/// Independent arguments come from the sampler; dependency arguments are
/// extracted from the observation produced earlier in the same chain.
/// Returns ids of entries that were new to the builder, in insertion order.
/// Throws UpstreamError (with step index) or ClosureError.
std::vector<EntryId> expand_workflow(const WorkflowTemplate& tmpl, const Upstream& upstream,
                                     const ArgumentSampler& sampler, CacheBuilder& cache, int breadth,
                                     std::uint64_t seed);

}  // namespace toolgym

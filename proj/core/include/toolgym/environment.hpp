#pragma once

#include <memory>

#include "toolgym/cache_store.hpp"
#include "toolgym/schema.hpp"
#include "toolgym/validators.hpp"

namespace toolgym {

/// Exec(f, args): validates arguments against the registry and serves the
/// cached observation. Bad calls come back as error observations; nothing
/// here throws for agent mistakes. Shared read-only between episodes.
class Environment {
 public:
  Environment(std::shared_ptr<const CacheStore> store, std::shared_ptr<const Registry> registry);

  Observation execute(const ToolCall& call) const;

  const CacheStore& store() const noexcept { return *store_; }
  const Registry& registry() const noexcept { return *registry_; }

 private:
  std::shared_ptr<const CacheStore> store_;
  std::shared_ptr<const Registry> registry_;
};

}  // namespace toolgym

#include "toolgym/environment.hpp"

#include <stdexcept>

namespace toolgym {

Environment::Environment(std::shared_ptr<const CacheStore> store, std::shared_ptr<const Registry> registry)
    : store_(std::move(store)), registry_(std::move(registry)) {
  if (!store_ || !registry_) throw std::invalid_argument("environment needs a store and a registry");
}

Observation Environment::execute(const ToolCall& call) const {
  const FunctionSchema* schema = registry_->find(call.function);
  if (schema == nullptr) {
    return Observation::failure(ErrorCode::kUnknownFunction, "function '" + call.function + "' does not exist");
  }
  ValidationResult v = validate_args(*schema, call);
  if (!v.ok()) {
    std::string msg = std::to_string(v.violations.size()) + " invalid argument(s): " + v.violations.front().message;
    return Observation::failure(ErrorCode::kValidationFailed, std::move(msg), v.to_json());
  }
  if (const Observation* obs = store_->lookup(call)) return *obs;
  return Observation::failure(ErrorCode::kCacheMiss, "no recorded response for these arguments");
}

}  // namespace toolgym

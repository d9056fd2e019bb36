#include "toolgym/cache_store.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "toolgym/errors.hpp"

namespace toolgym {

const CacheEntry* CacheStore::find(const CacheKey& key) const {
  auto it = by_key_.find(key);
  return it == by_key_.end() ? nullptr : &entries_[it->second];
}

const Observation* CacheStore::lookup(const CacheKey& key) const {
  const CacheEntry* e = find(key);
  return e ? &e->observation : nullptr;
}

std::span<const EntryId> CacheStore::ids_for(std::string_view function) const {
  auto it = by_function_.find(function);
  if (it == by_function_.end()) return {};
  return it->second;
}

void CacheStore::save(std::ostream& out) const {
  for (const auto& e : entries_) {
    Value line{{"id", e.id}, {"call", e.call.to_json()}, {"observation", e.observation.to_json()}};
    out << canonical_string(line) << '\n';
  }
}

void CacheStore::save(const std::filesystem::path& file) const {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write snapshot " + file.string());
  save(out);
}

CacheStore CacheStore::load(std::istream& in) {
  CacheBuilder b;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      Value doc = Value::parse(line);
      const auto id = doc.at("id").get<EntryId>();
      if (id != b.size()) {
        throw SchemaError("snapshot ids must be dense and sorted; expected " + std::to_string(b.size()) +
                          ", found " + std::to_string(id));
      }
      auto obs = Observation::from_json(doc.at("observation"));
      const auto got = b.add(ToolCall::from_json(doc.at("call")), std::move(obs));
      if (got != id) throw SchemaError("duplicate key in snapshot at id " + std::to_string(id));
    } catch (const Value::exception& e) {
      throw SchemaError("snapshot line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return std::move(b).freeze();
}

CacheStore CacheStore::load(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error("cannot open snapshot " + file.string());
  return load(in);
}

EntryId CacheBuilder::add(ToolCall call, Observation observation) {
  if (observation.is_error()) throw std::invalid_argument("cache entries must not be error observations");
  const CacheKey key = canonical_key(call);
  if (const CacheEntry* existing = store_.find(key)) {
    if (existing->observation == observation) return existing->id;
    throw ConflictError(key.hex(), existing->id, store_.entries_.size());
  }
  const EntryId id = store_.entries_.size();
  store_.by_key_.emplace(key, id);
  store_.by_function_[call.function].push_back(id);
  store_.entries_.push_back(CacheEntry{id, key, std::move(call), std::move(observation)});
  return id;
}

}  // namespace toolgym

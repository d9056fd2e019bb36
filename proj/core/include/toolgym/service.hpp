#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "toolgym/episode.hpp"
#include "toolgym/reward.hpp"

namespace toolgym {

extern const char* const kDefaultSystemPrompt;

struct ServiceConfig {
  std::string cache_path;
  std::string templates_dir;
  std::string registry_path;
  std::string dataset_path;
  std::string system_prompt_path;  // empty: built-in prompt
  double lambda = kDefaultLambda;
  int max_turns = kDefaultMaxTurns;
  std::uint64_t seed = 0;
  std::string listen = "stdio";  // "stdio" or "HOST:PORT"

  /// Keys present in `doc` override the defaults; unknown keys are rejected.
  static ServiceConfig from_json(const Value& doc);
  static ServiceConfig load(const std::filesystem::path& file);
  Value to_json() const;
};

/// Session-based request handler. Every request document
///   {"kind": ..., "session_id"?: ..., "id"?: ..., "body"?: {...}}
/// gets exactly one response
///   {"kind": "ack"|"error", "session_id"?: ..., "id"?: ..., "body": {...}}.
/// Thread-safe; requests for different sessions run concurrently.
class Server {
 public:
  Server(std::shared_ptr<const Environment> env, std::vector<DatasetSample> dataset,
         std::string system_prompt = kDefaultSystemPrompt, double lambda = kDefaultLambda,
         int max_turns = kDefaultMaxTurns, std::uint64_t seed = 0);

  Value handle(const Value& request);
  /// Parses one wire line and serializes the response. Never throws.
  std::string handle_line(std::string_view line);

  std::size_t session_count() const;
  const std::vector<DatasetSample>& dataset() const noexcept { return dataset_; }

 private:
  struct Session {
    std::mutex mu;
    std::unique_ptr<Episode> episode;
  };

  Value on_hello(const Value& body) const;
  Value on_reset(const Value& request, const Value& body);
  Value on_step(Session& s, const Value& body);
  Value on_score(Session& s) const;

  std::shared_ptr<Session> find(const std::string& id) const;
  std::string new_session_id();

  std::shared_ptr<const Environment> env_;
  std::vector<DatasetSample> dataset_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::string system_prompt_;
  Value tools_;
  double lambda_;
  int max_turns_;
  std::uint64_t seed_;

  mutable std::mutex sessions_mu_;
  std::unordered_map<std::string, std::shared_ptr<Session>> sessions_;
  std::atomic<std::uint64_t> next_session_{0};
};

/// Serves line-delimited requests until EOF.
void serve_stream(Server& server, std::istream& in, std::ostream& out);

/// TCP listener, one thread per connection. Returns when `stop` becomes true
/// (checked between accepts) or on a socket error. `bound_port` receives the
/// actual port, useful with port 0.
void serve_tcp(Server& server, const std::string& host, std::uint16_t port, const std::atomic<bool>* stop = nullptr,
               std::atomic<std::uint16_t>* bound_port = nullptr);

/// Splits "HOST:PORT"; throws std::invalid_argument.
std::pair<std::string, std::uint16_t> parse_listen_address(std::string_view address);

}  // namespace toolgym

#include "toolgym/service.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <thread>

#include "toolgym/errors.hpp"
#include "toolgym/evaluator.hpp"
#include "toolgym/rng.hpp"

namespace toolgym {

const char* const kDefaultSystemPrompt =
    "You are a helpful assistant with access to booking.com APIs. You can help users search for hotels, flights, "
    "attractions, and more.\n"
    "\n"
    "When you need to use a tool, output your tool call in this format:\n"
    "<tool_call>\n"
    "{\"name\": \"function_name\",\n"
    " \"arguments\": {\"arg1\": \"value1\", \"arg2\": \"value2\"}}\n"
    "</tool_call>\n"
    "\n"
    "After you make a tool call, you will receive a response:\n"
    "<tool_response>\n"
    "{\"result\": \"...\"}\n"
    "</tool_response>\n"
    "\n"
    "You may need to make multiple tool calls to complete a task. After gathering all necessary information, "
    "provide a helpful summary to the user.";

ServiceConfig ServiceConfig::from_json(const Value& doc) {
  if (!doc.is_object()) throw SchemaError("service config must be an object");
  ServiceConfig c;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& k = it.key();
    const Value& v = it.value();
    if (k == "cache_path") c.cache_path = v.get<std::string>();
    else if (k == "templates_dir") c.templates_dir = v.get<std::string>();
    else if (k == "registry_path") c.registry_path = v.get<std::string>();
    else if (k == "dataset_path") c.dataset_path = v.get<std::string>();
    else if (k == "system_prompt_path") c.system_prompt_path = v.get<std::string>();
    else if (k == "lambda") c.lambda = v.get<double>();
    else if (k == "max_turns") c.max_turns = v.get<int>();
    else if (k == "seed") c.seed = v.get<std::uint64_t>();
    else if (k == "listen") c.listen = v.get<std::string>();
    else throw SchemaError("unknown service config key '" + k + "'");
  }
  if (!(c.lambda >= 0.0 && c.lambda <= 1.0)) throw SchemaError("lambda must lie in [0, 1]");
  if (c.max_turns < 1) throw SchemaError("max_turns must be positive");
  return c;
}

ServiceConfig ServiceConfig::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot open config " + file.string());
  return from_json(Value::parse(in));
}

Value ServiceConfig::to_json() const {
  return Value{{"cache_path", cache_path},
               {"templates_dir", templates_dir},
               {"registry_path", registry_path},
               {"dataset_path", dataset_path},
               {"system_prompt_path", system_prompt_path},
               {"lambda", lambda},
               {"max_turns", max_turns},
               {"seed", seed},
               {"listen", listen}};
}

namespace {

Value error_body(std::string_view code, std::string_view message) {
  return Value{{"code", code}, {"message", message}};
}

struct ProtocolError {
  std::string code;
  std::string message;
};

[[noreturn]] void fail(std::string code, std::string message) { throw ProtocolError{std::move(code), std::move(message)}; }

Value ratio_json(const Ratio& r) { return Value{{"num", r.num}, {"den", r.den}, {"value", r.value()}}; }

}  // namespace

Server::Server(std::shared_ptr<const Environment> env, std::vector<DatasetSample> dataset, std::string system_prompt,
               double lambda, int max_turns, std::uint64_t seed)
    : env_(std::move(env)),
      dataset_(std::move(dataset)),
      system_prompt_(std::move(system_prompt)),
      lambda_(lambda),
      max_turns_(max_turns),
      seed_(seed) {
  if (!env_) throw std::invalid_argument("server needs an environment");
  if (!(lambda_ >= 0.0 && lambda_ <= 1.0)) throw std::invalid_argument("lambda must lie in [0, 1]");
  for (std::size_t i = 0; i < dataset_.size(); ++i) {
    if (!by_id_.emplace(dataset_[i].id, i).second) throw SchemaError("duplicate sample id '" + dataset_[i].id + "'");
  }
  tools_ = env_->registry().tool_list();
}

std::size_t Server::session_count() const {
  std::lock_guard lock(sessions_mu_);
  return sessions_.size();
}

std::shared_ptr<Server::Session> Server::find(const std::string& id) const {
  std::lock_guard lock(sessions_mu_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::string Server::new_session_id() {
  const std::uint64_t n = next_session_.fetch_add(1);
  char buf[32];
  std::snprintf(buf, sizeof buf, "s%llu-%08llx", static_cast<unsigned long long>(n),
                static_cast<unsigned long long>(derive_seed(seed_, "session", n) & 0xffffffffULL));
  return buf;
}

Value Server::on_hello(const Value&) const {
  return Value{{"protocol", 1},
               {"samples", dataset_.size()},
               {"functions", env_->registry().size()},
               {"cache_entries", env_->store().size()},
               {"lambda", lambda_},
               {"max_turns", max_turns_},
               {"seed", seed_}};
}

Value Server::on_reset(const Value& request, const Value& body) {
  const DatasetSample* sample = nullptr;
  if (body.contains("sample_id")) {
    if (!body["sample_id"].is_string()) fail("BAD_REQUEST", "sample_id must be a string");
    auto it = by_id_.find(body["sample_id"].get<std::string>());
    if (it == by_id_.end()) fail("UNKNOWN_SAMPLE", "no sample '" + body["sample_id"].get<std::string>() + "'");
    sample = &dataset_[it->second];
  } else if (body.contains("dataset_index")) {
    const Value& idx = body["dataset_index"];
    if (!idx.is_number_integer() || idx.get<std::int64_t>() < 0 ||
        static_cast<std::uint64_t>(idx.get<std::int64_t>()) >= dataset_.size()) {
      fail("BAD_REQUEST", "dataset_index out of range");
    }
    sample = &dataset_[idx.get<std::size_t>()];
  } else {
    fail("BAD_REQUEST", "reset needs sample_id or dataset_index");
  }

  int max_turns = max_turns_;
  if (body.contains("max_turns")) {
    if (!body["max_turns"].is_number_integer() || body["max_turns"].get<std::int64_t>() < 1 ||
        body["max_turns"].get<std::int64_t>() > 1000) {
      fail("BAD_REQUEST", "max_turns must be an integer in [1, 1000]");
    }
    max_turns = body["max_turns"].get<int>();
  }

  // Resetting a live session reuses its id, so a retried reset is harmless.
  std::string id;
  std::shared_ptr<Session> session;
  if (request.contains("session_id") && request["session_id"].is_string()) {
    id = request["session_id"].get<std::string>();
    session = find(id);
    if (!session) fail("NO_SESSION", "unknown session '" + id + "'");
  } else {
    id = new_session_id();
    session = std::make_shared<Session>();
    std::lock_guard lock(sessions_mu_);
    sessions_.emplace(id, session);
  }
  {
    std::lock_guard lock(session->mu);
    session->episode = std::make_unique<Episode>(*env_, *sample, max_turns);
  }
  return Value{{"session_id", id},
               {"sample_id", sample->id},
               {"system_prompt", system_prompt_},
               {"tools", tools_},
               {"query", sample->query},
               {"max_turns", max_turns}};
}

Value Server::on_step(Session& s, const Value& body) {
  if (!body.contains("assistant_text") || !body["assistant_text"].is_string()) {
    fail("BAD_REQUEST", "step needs a string assistant_text");
  }
  if (s.episode->closed()) fail("EPISODE_CLOSED", "episode already finished; score, reset or close it");
  const StepResult r = s.episode->step(body["assistant_text"].get_ref<const std::string&>());
  Value calls = Value::array();
  for (const auto& c : r.calls) calls.push_back(c.to_json());
  Value out{{"responses_text", r.responses_text},
            {"calls", std::move(calls)},
            {"done", r.done},
            {"turn", s.episode->turn_count()}};
  if (r.parse_error) out["parse_error"] = *r.parse_error;
  return out;
}

Value Server::on_score(Session& s) const {
  const Episode& ep = *s.episode;
  const auto calls = ep.predicted_calls();
  const auto obs = ep.observations();
  const auto turns = ep.predicted_turns();
  const GroundTruth& gt = ep.sample().ground_truth;
  const RewardReport reward = score_total(calls, gt, obs, lambda_, &env_->registry());
  const Ratio ta = turn_accuracy(turns, gt);
  const Ratio ca = call_accuracy(calls, gt);
  return Value{{"sample_id", ep.sample().id},
               {"reward", reward.to_json()},
               {"eval",
                {{"turn_acc", ratio_json(ta)},
                 {"call_acc", ratio_json(ca)},
                 {"errors", ErrorBreakdown::from_counts(classify_errors(turns, gt)).to_json()}}},
               {"turns", ep.turn_count()},
               {"closed", ep.closed()}};
}

Value Server::handle(const Value& request) {
  Value response{{"kind", "ack"}};
  try {
    if (!request.is_object()) fail("BAD_REQUEST", "request must be an object");
    if (request.contains("id")) response["id"] = request["id"];
    if (!request.contains("kind") || !request["kind"].is_string()) fail("BAD_REQUEST", "request needs a string kind");
    const std::string kind = request["kind"].get<std::string>();
    const Value body = request.contains("body") ? request["body"] : Value::object();
    if (!body.is_object()) fail("BAD_REQUEST", "body must be an object");
    if (request.contains("session_id") && !request["session_id"].is_string()) {
      fail("BAD_REQUEST", "session_id must be a string");
    }

    if (kind == "hello") {
      response["body"] = on_hello(body);
      return response;
    }
    if (kind == "reset") {
      response["body"] = on_reset(request, body);
      response["session_id"] = response["body"]["session_id"];
      return response;
    }
    if (kind != "step" && kind != "score" && kind != "close") fail("BAD_REQUEST", "unknown kind '" + kind + "'");
    if (!request.contains("session_id")) fail("NO_SESSION", kind + " needs a session_id");
    const std::string id = request["session_id"].get<std::string>();
    response["session_id"] = id;
    if (kind == "close") {
      std::lock_guard lock(sessions_mu_);
      if (sessions_.erase(id) == 0) fail("NO_SESSION", "unknown session '" + id + "'");
      response["body"] = Value{{"closed", true}};
      return response;
    }
    auto session = find(id);
    if (!session) fail("NO_SESSION", "unknown session '" + id + "'");
    std::lock_guard lock(session->mu);
    response["body"] = kind == "step" ? on_step(*session, body) : on_score(*session);
    return response;
  } catch (const ProtocolError& e) {
    response["kind"] = "error";
    response["body"] = error_body(e.code, e.message);
  } catch (const Value::exception& e) {
    response["kind"] = "error";
    response["body"] = error_body("BAD_REQUEST", e.what());
  } catch (const std::exception& e) {
    response["kind"] = "error";
    response["body"] = error_body("INTERNAL", e.what());
  }
  return response;
}

std::string Server::handle_line(std::string_view line) {
  try {
    Value request = Value::parse(line.begin(), line.end(), nullptr, false);
    Value response = request.is_discarded()
                         ? Value{{"kind", "error"}, {"body", error_body("BAD_REQUEST", "malformed JSON")}}
                         : handle(request);
    return response.dump(-1, ' ', false, Value::error_handler_t::replace);
  } catch (const std::exception& e) {
    Value response{{"kind", "error"}, {"body", error_body("INTERNAL", e.what())}};
    return response.dump(-1, ' ', false, Value::error_handler_t::replace);
  }
}

void serve_stream(Server& server, std::istream& in, std::ostream& out) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    out << server.handle_line(line) << '\n';
    out.flush();
  }
}

std::pair<std::string, std::uint16_t> parse_listen_address(std::string_view address) {
  const auto colon = address.rfind(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("listen address must be HOST:PORT");
  std::string host(address.substr(0, colon));
  const std::string_view port_text = address.substr(colon + 1);
  unsigned port = 0;
  const auto [p, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (ec != std::errc{} || p != port_text.data() + port_text.size() || port > 65535 || port_text.empty()) {
    throw std::invalid_argument("bad port in listen address '" + std::string(address) + "'");
  }
  if (host.empty()) host = "127.0.0.1";
  return {host, static_cast<std::uint16_t>(port)};
}

namespace {

bool send_all(int fd, std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n <= 0) return false;
    data.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

void serve_connection(Server& server, int fd) {
  constexpr std::size_t kMaxLine = 64u << 20;
  std::string buffer;
  char chunk[8192];
  bool open = true;
  while (open) {
    const ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
    if (n <= 0) break;
    buffer.append(chunk, static_cast<std::size_t>(n));
    std::size_t start = 0;
    for (std::size_t nl; (nl = buffer.find('\n', start)) != std::string::npos; start = nl + 1) {
      std::string_view line(buffer.data() + start, nl - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (line.empty()) continue;
      if (!send_all(fd, server.handle_line(line) + "\n")) {
        open = false;
        break;
      }
    }
    buffer.erase(0, start);
    if (buffer.size() > kMaxLine) {
      Value err{{"kind", "error"}, {"body", error_body("BAD_REQUEST", "line too long")}};
      send_all(fd, err.dump() + "\n");
      break;
    }
  }
  ::close(fd);
}

}  // namespace

void serve_tcp(Server& server, const std::string& host, std::uint16_t port, const std::atomic<bool>* stop,
               std::atomic<std::uint16_t>* bound_port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const std::string port_str = std::to_string(port);
  if (const int rc = ::getaddrinfo(host.c_str(), port_str.c_str(), &hints, &res); rc != 0) {
    throw Error(std::string("cannot resolve ") + host + ": " + ::gai_strerror(rc));
  }
  int listener = -1;
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    listener = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (listener < 0) continue;
    int one = 1;
    ::setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(listener, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(listener, 128) == 0) break;
    ::close(listener);
    listener = -1;
  }
  ::freeaddrinfo(res);
  if (listener < 0) throw Error("cannot listen on " + host + ":" + port_str);

  if (bound_port != nullptr) {
    sockaddr_storage addr{};
    socklen_t len = sizeof addr;
    ::getsockname(listener, reinterpret_cast<sockaddr*>(&addr), &len);
    const auto p = addr.ss_family == AF_INET6 ? reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port
                                              : reinterpret_cast<sockaddr_in*>(&addr)->sin_port;
    bound_port->store(ntohs(p));
  }

  std::vector<std::thread> workers;
  while (stop == nullptr || !stop->load()) {
    pollfd pfd{listener, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, 100);
    if (ready < 0) break;
    if (ready == 0) continue;
    const int fd = ::accept(listener, nullptr, nullptr);
    if (fd < 0) continue;
    workers.emplace_back(serve_connection, std::ref(server), fd);
  }
  ::close(listener);
  for (auto& t : workers) t.join();
}

}  // namespace toolgym

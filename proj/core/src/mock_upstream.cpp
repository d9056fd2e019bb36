#include "toolgym/mock_upstream.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string_view>
#include <vector>

#include "toolgym/canonical.hpp"
#include "toolgym/errors.hpp"

namespace toolgym {
namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

long long to_int(std::string_view s) {
  long long v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size()) throw SchemaError("bad integer '" + std::string(s) + "' in shape");
  return v;
}

double round_to(double v, int places) {
  const double scale = std::pow(10.0, places);
  return std::round(v * scale) / scale;
}

// Days since 1970-01-01 for a civil date and back (Howard Hinnant's algorithms).
long long days_from_civil(long long y, unsigned m, unsigned d) {
  y -= m <= 2;
  const long long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long long>(doe) - 719468;
}

std::string civil_from_days(long long z) {
  z += 719468;
  const long long era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  long long y = static_cast<long long>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  y += m <= 2;
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02u", y, m, d);
  return buf;
}

Value placeholder(std::string_view expr, const Value& args, Rng& rng) {
  auto parts = split(expr, ':');
  const std::string_view kind = parts[0];
  if (kind == "arg") {
    if (parts.size() != 2) throw SchemaError("${arg:NAME} takes one name");
    auto it = args.find(std::string(parts[1]));
    return it == args.end() ? Value(nullptr) : *it;
  }
  if (kind == "digits") {
    const auto n = to_int(parts.at(1));
    std::string s(1, static_cast<char>('1' + rng.below(9)));
    for (long long i = 1; i < n; ++i) s += static_cast<char>('0' + rng.below(10));
    return s;
  }
  if (kind == "upper") {
    const auto n = to_int(parts.at(1));
    std::string s;
    for (long long i = 0; i < n; ++i) s += static_cast<char>('A' + rng.below(26));
    return s;
  }
  if (kind == "token") {
    static constexpr std::string_view kAlphabet =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    const auto n = to_int(parts.at(1));
    std::string s = "eyJ";
    for (long long i = 3; i < n; ++i) s += kAlphabet[rng.below(kAlphabet.size())];
    return s;
  }
  if (kind == "lat") return round_to(-60.0 + rng.unit() * 130.0, 2);
  if (kind == "lon") return round_to(-170.0 + rng.unit() * 340.0, 2);
  if (kind == "price") return round_to(20.0 + rng.unit() * 980.0, 2);
  if (kind == "int") {
    const auto lo = to_int(parts.at(1));
    const auto hi = to_int(parts.at(2));
    return lo + static_cast<long long>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
  if (kind == "pick") {
    // Options may contain ':' themselves, e.g. times.
    if (parts.size() < 2) throw SchemaError("${pick:a|b} needs options");
    auto options = split(expr.substr(5), '|');
    return std::string(options[rng.below(options.size())]);
  }
  if (kind == "date") {
    auto from = split(parts.at(1), '-');
    if (from.size() != 3) throw SchemaError("${date:FROM:DAYS} needs FROM as YYYY-MM-DD");
    const long long base = days_from_civil(to_int(from[0]), static_cast<unsigned>(to_int(from[1])),
                                           static_cast<unsigned>(to_int(from[2])));
    const auto span = to_int(parts.at(2));
    return civil_from_days(base + static_cast<long long>(rng.below(static_cast<std::uint64_t>(span))));
  }
  throw SchemaError("unknown placeholder '${" + std::string(expr) + "}'");
}

std::string as_text(const Value& v) { return v.is_string() ? v.get<std::string>() : canonical_string(v); }

Value render_string(const std::string& s, const Value& args, Rng& rng) {
  if (s.size() > 3 && s.starts_with("${") && s.ends_with("}") && s.find("${", 2) == std::string::npos) {
    return placeholder(std::string_view(s).substr(2, s.size() - 3), args, rng);
  }
  std::string out;
  std::size_t pos = 0;
  while (true) {
    auto open = s.find("${", pos);
    if (open == std::string::npos) {
      out.append(s, pos);
      break;
    }
    auto close = s.find('}', open);
    if (close == std::string::npos) throw SchemaError("unterminated placeholder in '" + s + "'");
    out.append(s, pos, open - pos);
    out += as_text(placeholder(std::string_view(s).substr(open + 2, close - open - 2), args, rng));
    pos = close + 1;
  }
  return out;
}

}  // namespace

Value render_shape(const Value& shape, const Value& args, Rng& rng) {
  if (shape.is_string()) return render_string(shape.get<std::string>(), args, rng);
  if (shape.is_object()) {
    Value out = Value::object();
    for (auto it = shape.begin(); it != shape.end(); ++it) out[it.key()] = render_shape(it.value(), args, rng);
    return out;
  }
  if (shape.is_array()) {
    Value out = Value::array();
    for (const auto& item : shape) {
      if (item.is_object() && item.contains("$repeat")) {
        const Value& r = item["$repeat"];
        std::uint64_t n = 0;
        if (r.is_array()) {
          const auto lo = r.at(0).get<std::uint64_t>();
          const auto hi = r.at(1).get<std::uint64_t>();
          n = lo + rng.below(hi - lo + 1);
        } else {
          n = r.get<std::uint64_t>();
        }
        for (std::uint64_t i = 0; i < n; ++i) out.push_back(render_shape(item.at("item"), args, rng));
      } else {
        out.push_back(render_shape(item, args, rng));
      }
    }
    return out;
  }
  return shape;
}

MockDomain MockDomain::from_json(const Value& doc) {
  if (!doc.is_object() || !doc.contains("functions") || !doc["functions"].is_object()) {
    throw SchemaError("mock domain needs a 'functions' map");
  }
  MockDomain m;
  for (auto it = doc["functions"].begin(); it != doc["functions"].end(); ++it) {
    Function f;
    if (it.value().contains("samples")) f.samples = it.value()["samples"];
    if (!it.value().contains("response")) throw SchemaError("mock function '" + it.key() + "' has no response");
    f.response = it.value()["response"];
    m.functions_.emplace(it.key(), std::move(f));
  }
  return m;
}

MockDomain MockDomain::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot open mock domain " + file.string());
  return from_json(Value::parse(in));
}

bool MockDomain::knows(std::string_view function) const { return functions_.find(function) != functions_.end(); }

Observation MockDomain::respond(const ToolCall& call, std::uint64_t seed) const {
  auto it = functions_.find(call.function);
  if (it == functions_.end()) {
    return Observation::failure(ErrorCode::kUnknownFunction, "no mock for function '" + call.function + "'");
  }
  Rng rng(derive_seed(seed, canonical_call_string(call), 0));
  return Observation::success(render_shape(it->second.response, call.args, rng));
}

Value MockDomain::sample_args(std::string_view function, Rng& rng) const {
  auto it = functions_.find(function);
  if (it == functions_.end()) throw Error("no mock for function '" + std::string(function) + "'");
  Value args = Value::object();
  const Value none = Value::object();
  for (auto s = it->second.samples.begin(); s != it->second.samples.end(); ++s) {
    const Value& pool = s.value();
    if (pool.is_array()) {
      if (!pool.empty()) args[s.key()] = pool[rng.below(pool.size())];
    } else {
      args[s.key()] = render_shape(pool, none, rng);
    }
  }
  return args;
}

}  // namespace toolgym

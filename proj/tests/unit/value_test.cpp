#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <random>
#include <unordered_set>

#include "toolgym/canonical.hpp"
#include "toolgym/errors.hpp"
#include "toolgym/tool_call.hpp"
#include "toolgym/value.hpp"

using namespace toolgym;

TEST(Canonical, SortsKeysAndDropsWhitespace) {
  const Value v = Value::parse(R"({"b": [1, 2.5, "x"], "a": {"z": null, "y": true}})");
  EXPECT_EQ(canonical_string(v), R"({"a":{"y":true,"z":null},"b":[1,2.5,"x"]})");
}

TEST(Canonical, IntegerAndFloatStayDistinct) {
  EXPECT_EQ(canonical_string(Value(1)), "1");
  EXPECT_EQ(canonical_string(Value(1.0)), "1.0");
  EXPECT_FALSE(canonical_equal(Value(1), Value(1.0)));
  EXPECT_TRUE(canonical_equal(Value(-3), Value(static_cast<std::int64_t>(-3))));
  EXPECT_TRUE(canonical_equal(Value(7u), Value(7)));
}

TEST(Canonical, ShortestRoundTripFloats) {
  EXPECT_EQ(canonical_string(Value(32.87)), "32.87");
  EXPECT_EQ(canonical_string(Value(-117.22)), "-117.22");
  EXPECT_EQ(canonical_string(Value(0.1 + 0.2)), "0.30000000000000004");
  EXPECT_EQ(canonical_string(Value(1e21)), "1e+21");
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-1e6, 1e6);
  for (int i = 0; i < 2000; ++i) {
    const double x = d(rng);
    EXPECT_EQ(Value::parse(canonical_string(Value(x))).get<double>(), x);
  }
}

TEST(Canonical, NullDiffersFromAbsent) {
  const ToolCall with_null("f", Value{{"a", 1}, {"b", nullptr}});
  const ToolCall without("f", Value{{"a", 1}});
  EXPECT_NE(canonical_key(with_null), canonical_key(without));
}

TEST(Canonical, FunctionNamesAreCaseSensitive) {
  EXPECT_NE(canonical_key(ToolCall("Search_Hotels", Value{{"x", 1}})),
            canonical_key(ToolCall("search_hotels", Value{{"x", 1}})));
}

TEST(Canonical, KeyIgnoresArgumentOrder) {
  const ToolCall a = ToolCall::from_json(Value::parse(
      R"({"name":"Search_Car_Rentals","arguments":{"pick_up_latitude":32.87,"pick_up_longitude":-117.22,"pick_up_date":"2024-10-31"}})"));
  const ToolCall b = ToolCall::from_json(Value::parse(
      R"({"name":"Search_Car_Rentals","arguments":{"pick_up_date":"2024-10-31","pick_up_longitude":-117.22,"pick_up_latitude":32.87}})"));
  EXPECT_EQ(canonical_key(a), canonical_key(b));
  EXPECT_EQ(a, b);
}

TEST(Canonical, KeyOrderIndependenceOverRandomPermutations) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::pair<std::string, Value>> kv;
    const int n = 1 + static_cast<int>(rng() % 8);
    for (int i = 0; i < n; ++i) {
      Value v;
      switch (rng() % 4) {
        case 0: v = static_cast<std::int64_t>(rng() % 1000) - 500; break;
        case 1: v = static_cast<double>(rng() % 10000) / 7.0; break;
        case 2: v = "s" + std::to_string(rng() % 50); break;
        default: v = Value{{"inner", static_cast<int>(rng() % 3)}, {"a", nullptr}};
      }
      kv.emplace_back("k" + std::to_string(i), v);
    }
    std::string text_a = "{", text_b = "{";
    for (std::size_t i = 0; i < kv.size(); ++i) text_a += (i ? "," : "") + Value(kv[i].first).dump() + ":" + kv[i].second.dump();
    std::shuffle(kv.begin(), kv.end(), rng);
    for (std::size_t i = 0; i < kv.size(); ++i) text_b += (i ? "," : "") + Value(kv[i].first).dump() + ":" + kv[i].second.dump();
    const ToolCall a("f", Value::parse(text_a + "}"));
    const ToolCall b("f", Value::parse(text_b + "}"));
    ASSERT_EQ(canonical_key(a), canonical_key(b));
  }
}

TEST(Canonical, SameKeyAcrossProcesses) {
  const ToolCall call("Search_Car_Location", Value{{"query", "San Diego Marriott La Jolla"}});
  // SHA-256 of the canonical call string computed outside this library.
  EXPECT_EQ(canonical_key(call).hex(), "3bbaf339d78a3b7882a4e54bf0c5e419");

  int fds[2];
  ASSERT_EQ(pipe(fds), 0);
  const pid_t pid = fork();
  ASSERT_GE(pid, 0);
  if (pid == 0) {
    close(fds[0]);
    const std::string hex = canonical_key(call).hex();
    (void)!write(fds[1], hex.data(), hex.size());
    close(fds[1]);
    _exit(0);
  }
  close(fds[1]);
  char buf[64] = {};
  const ssize_t n = read(fds[0], buf, sizeof buf);
  close(fds[0]);
  int status = 0;
  waitpid(pid, &status, 0);
  ASSERT_GT(n, 0);
  EXPECT_EQ(std::string(buf, static_cast<std::size_t>(n)), canonical_key(call).hex());
}

TEST(Canonical, NoCollisionsOverHundredThousandCalls) {
  std::unordered_set<CacheKey, CacheKeyHash> keys;
  std::unordered_set<std::string> texts;
  std::mt19937_64 rng(99);
  const char* fns[] = {"Search_Hotels", "Search_Flights", "Get_Packages", "Search_Taxi"};
  for (int i = 0; i < 100000; ++i) {
    Value args{{"id", i}, {"page", static_cast<int>(rng() % 7)}, {"q", "q" + std::to_string(rng() % 1000)}};
    if (i % 3 == 0) args["lat"] = static_cast<double>(rng() % 18000) / 100.0;
    const ToolCall c(fns[i % 4], std::move(args));
    texts.insert(canonical_call_string(c));
    keys.insert(canonical_key(c));
  }
  ASSERT_EQ(texts.size(), 100000u);  // the corpus really is 100k distinct calls
  EXPECT_EQ(keys.size(), 100000u);
}

TEST(ToolCall, RejectsBadShapes) {
  EXPECT_THROW(ToolCall("", Value::object()), SchemaError);
  EXPECT_THROW(ToolCall("f", Value::array()), SchemaError);
  EXPECT_THROW(ToolCall::from_json(Value{{"arguments", Value::object()}}), SchemaError);
  EXPECT_EQ(ToolCall("f", nullptr).args, Value::object());
}

TEST(Observation, ErrorShapeRoundTrips) {
  const Observation o = Observation::failure(ErrorCode::kCacheMiss, "no entry");
  EXPECT_TRUE(o.is_error());
  const Observation back = Observation::from_json(o.to_json());
  ASSERT_TRUE(back.is_error());
  EXPECT_EQ(back.error()->code, ErrorCode::kCacheMiss);
  EXPECT_EQ(back.error()->message, "no entry");
  EXPECT_THROW(Observation::success(Value("scalar")), SchemaError);
  EXPECT_THROW(Observation::success(Value()), SchemaError);
}

TEST(Value, DumpSpacedMatchesPromptStyle) {
  EXPECT_EQ(dump_spaced(Value{{"name", "f"}, {"arguments", {{"a", 1.0}}}}), R"({"arguments": {"a": 1.0}, "name": "f"})");
}

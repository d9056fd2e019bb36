#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "dependency_oracle.hpp"
#include "echo_mutation.hpp"
#include "test_support.hpp"
#include "toolgym/errors.hpp"
#include "toolgym/expand.hpp"
#include "toolgym/mock_upstream.hpp"
#include "toolgym/synthesizer.hpp"

using namespace toolgym;
using testing_support::data_dir;

namespace {

std::vector<WorkflowTemplate> shipped() { return load_templates(data_dir() / "templates"); }

// Closure-complete store grown from every shipped template.
const CacheStore& mock_store() {
  static const CacheStore store = [] {
    const MockDomain mock = MockDomain::load(data_dir() / "mock_domain.json");
    CacheBuilder b;
    for (const auto& t : shipped()) expand_workflow(t, mock, mock, b, 12, 31);
    return std::move(b).freeze();
  }();
  return store;
}

std::shared_ptr<const Environment> mock_env() {
  static auto env = std::make_shared<const Environment>(std::make_shared<const CacheStore>(mock_store()),
                                                        testing_support::registry());
  return env;
}

const InvertedIndex& mock_index() {
  static const InvertedIndex idx = InvertedIndex::build(mock_store());
  return idx;
}

std::string dataset_bytes(const std::vector<DatasetSample>& samples) {
  std::ostringstream out;
  write_dataset(out, samples);
  return out.str();
}

Trace car_rental_trace() {
  const CacheStore store = CacheStore::load(testing_support::fixture("car_rental_cache.jsonl"));
  Rng rng(1);
  auto out = sample_trace(testing_support::shipped_template("car_rental_packages"), store, InvertedIndex::build(store), rng);
  return *out.trace;
}

}  // namespace

TEST(SampleTrace, CarRentalChainIsTheOnlyCandidate) {
  const CacheStore store = CacheStore::load(testing_support::fixture("car_rental_cache.jsonl"));
  const InvertedIndex idx = InvertedIndex::build(store);
  const auto t = testing_support::shipped_template("car_rental_packages");
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    const SampleOutcome out = sample_trace(t, store, idx, rng);
    ASSERT_FALSE(out.exhausted());
    EXPECT_EQ(out.restarts, 0);
    ASSERT_EQ(out.trace->steps.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_EQ(out.trace->steps[i].entry, i);
      EXPECT_EQ(out.trace->steps[i].call, store.entry(i).call);
    }
    EXPECT_EQ(out.trace->steps[2].dependency_params, (std::set<std::string>{"search_key", "vehicle_id"}));
  }
}

TEST(SampleTrace, NeverIntersectingConstraintExhausts) {
  const WorkflowTemplate t = parse_template(R"({"pattern":["A","B"],"dependencies":{"1":{"depends_on":[0],
      "dependency_args":{"x":{"from_step":0,"from_field":"id"}}}}})", "never");
  CacheBuilder b;
  b.add(ToolCall("A", Value{{"q", 1}}), Observation::success(Value{{"id", "one"}}));
  b.add(ToolCall("B", Value{{"x", "two"}}), Observation::success(Value{{"ok", true}}));
  const CacheStore s = std::move(b).freeze();
  Rng rng(3);
  const SampleOutcome out = sample_trace(t, s, InvertedIndex::build(s), rng, 4);
  EXPECT_TRUE(out.exhausted());
  EXPECT_EQ(out.restarts, 4);
}

TEST(SampleTrace, UnresolvablePathIsClosureError) {
  const WorkflowTemplate t = parse_template(R"({"pattern":["A","B"],"dependencies":{"1":{"depends_on":[0],
      "dependency_args":{"x":{"from_step":0,"from_field":"missing"}}}}})", "open");
  CacheBuilder b;
  b.add(ToolCall("A", Value{{"q", 1}}), Observation::success(Value{{"id", "one"}}));
  b.add(ToolCall("B", Value{{"x", "one"}}), Observation::success(Value{{"ok", true}}));
  const CacheStore s = std::move(b).freeze();
  Rng rng(3);
  EXPECT_THROW(sample_trace(t, s, InvertedIndex::build(s), rng), ClosureError);
}

TEST(SampleTrace, HundredTracesPassIndependentBindingCheck) {
  const auto templates = shipped();
  std::mt19937_64 pick(77);
  int checked = 0;
  // Templates with two independent lookups feeding one step can exhaust; those yield no trace.
  for (int i = 0; checked < 100; ++i) {
    ASSERT_LT(i, 400);
    const auto& t = templates[pick() % templates.size()];
    Rng rng(derive_seed(77, t.id, static_cast<std::uint64_t>(i)));
    const SampleOutcome out = sample_trace(t, mock_store(), mock_index(), rng);
    if (out.exhausted()) continue;
    std::vector<oracle::StepView> view;
    for (const auto& s : out.trace->steps) view.push_back({s.call.function, s.call.args, s.observation.payload()});
    const auto doc = oracle::json::parse(testing_support::read_file(data_dir() / "templates" / (t.id + ".json")));
    std::string why;
    EXPECT_TRUE(oracle::bindings_hold(doc, view, &why)) << t.id << ": " << why;
    EXPECT_TRUE(trace_bindings_hold(*out.trace, t));
    ++checked;
  }
}

TEST(Generator, FallbackQueryEmbedsExactValues) {
  FallbackGenerator gen(testing_support::registry().get());
  const Trace trace = car_rental_trace();
  const QueryDraft d = generate_query(trace, gen);
  for (const char* v : {"San Diego Marriott La Jolla", "2024-10-31", "10:00"})
    EXPECT_NE(d.query.find(v), std::string::npos) << v << " missing from: " << d.query;
  EXPECT_TRUE(verify_echo_back(d, trace));
  const QueryDraft again = generate_query(trace, gen);
  EXPECT_EQ(again.to_json(), d.to_json());
}

TEST(Generator, EmptyArgsSingleStep) {
  Trace t;
  t.template_id = "currency_list";
  t.pattern = {"Get_Currency"};
  t.steps.push_back({ToolCall("Get_Currency", Value::object()), Observation::success(Value::array({"USD"})), 0, {}});
  FallbackGenerator gen(testing_support::registry().get());
  const QueryDraft d = generate_query(t, gen);
  EXPECT_FALSE(d.query.empty());
  EXPECT_EQ(d.query.find('"'), std::string::npos);
  EXPECT_EQ(d.chosen_parameters, std::vector<Value>{Value::object()});
}

TEST(Generator, PromptLabelsDependencyParameters) {
  const QueryPrompt p = build_query_prompt(car_rental_trace());
  EXPECT_NE(p.user.find("(Parameters from previous step results)"), std::string::npos);
  EXPECT_NE(p.user.find("San Diego Marriott La Jolla"), std::string::npos);
  EXPECT_NE(p.user.find("chosen_parameters"), std::string::npos);
  EXPECT_FALSE(p.system.empty());
}

TEST(EchoBack, SingleValueChangeIsRejected) {
  const Trace trace = car_rental_trace();
  QueryDraft d = FallbackGenerator().generate(trace, build_query_prompt(trace));
  ASSERT_TRUE(verify_echo_back(d, trace));
  d.chosen_parameters[1]["pick_up_date"] = "2024-11-01";
  EXPECT_FALSE(verify_echo_back(d, trace));
  d.chosen_parameters.pop_back();
  EXPECT_FALSE(verify_echo_back(d, trace));
}

TEST(EchoBack, RejectsExactlyTheMutatedDrafts) {
  const auto templates = shipped();
  std::mt19937_64 rng(404);
  FallbackGenerator gen;
  int mutated = 0, drafts = 0;
  for (int i = 0; drafts < 50; ++i) {
    ASSERT_LT(i, 200);
    const auto& t = templates[rng() % templates.size()];
    Rng r(derive_seed(404, t.id, static_cast<std::uint64_t>(i)));
    const auto out = sample_trace(t, mock_store(), mock_index(), r);
    if (out.exhausted()) continue;
    ++drafts;
    // Faithful echo: every argument, dependency-bound ones included.
    std::vector<oracle::json> faithful;
    std::vector<std::vector<std::string>> exempt;
    for (const auto& s : out.trace->steps) {
      faithful.push_back(s.call.args);
      exempt.emplace_back(s.dependency_params.begin(), s.dependency_params.end());
    }
    const oracle::Mutant m = oracle::mutate(faithful, exempt, rng);
    QueryDraft d;
    d.query = "q";
    d.chosen_parameters.assign(m.chosen.begin(), m.chosen.end());
    EXPECT_EQ(verify_echo_back(d, *out.trace), !m.mutated) << t.id << " draft " << i;
    mutated += m.mutated;
  }
  EXPECT_GT(mutated, 10);
  EXPECT_LT(mutated, 50);
}

TEST(Synthesize, TenTemplatesTimesThreeAllAccepted) {
  auto templates = shipped();
  templates.resize(10);
  FallbackGenerator gen(testing_support::registry().get());
  SynthesisOptions opt;
  opt.per_template = 3;
  opt.seed = 9;
  const SynthesisResult r = synthesize_dataset(templates, *mock_env(), mock_index(), gen, opt);
  EXPECT_EQ(r.samples.size(), 30u);
  EXPECT_EQ(r.report.slots(), 30u);
  EXPECT_EQ(r.report.accepted(), 30u);
  EXPECT_DOUBLE_EQ(r.report.yield(), 1.0);
  for (const auto& s : r.samples) {
    EXPECT_TRUE(replays_cleanly(s.ground_truth, *mock_env())) << s.id;
    EXPECT_NO_THROW(s.ground_truth.validate());
    const auto levels = turn_levels(*std::find_if(templates.begin(), templates.end(),
                                                  [&](const auto& t) { return t.id == s.provenance.template_id; }));
    for (std::size_t i = 0; i < s.ground_truth.calls.size(); ++i) EXPECT_EQ(s.ground_truth.calls[i].turn, levels[i]);
  }
}

TEST(Synthesize, ZeroPerTemplateIsEmpty) {
  FallbackGenerator gen;
  SynthesisOptions opt;
  opt.per_template = 0;
  const auto templates = shipped();
  const SynthesisResult r = synthesize_dataset(templates, *mock_env(), mock_index(), gen, opt);
  EXPECT_TRUE(r.samples.empty());
  EXPECT_EQ(r.report.slots(), 0u);
}

TEST(Synthesize, SameSeedSameBytes) {
  const auto templates = shipped();
  auto run = [&](std::uint64_t seed) {
    FallbackGenerator gen(testing_support::registry().get());
    SynthesisOptions opt;
    opt.per_template = 4;
    opt.seed = seed;
    return dataset_bytes(synthesize_dataset(templates, *mock_env(), mock_index(), gen, opt).samples);
  };
  const std::string a = run(5);
  EXPECT_EQ(a, run(5));
  EXPECT_NE(a, run(6));
}

TEST(Synthesize, DatasetFileRoundTrips) {
  const auto templates = shipped();
  FallbackGenerator gen;
  SynthesisOptions opt;
  opt.per_template = 2;
  const auto samples = synthesize_dataset(templates, *mock_env(), mock_index(), gen, opt).samples;
  const std::string bytes = dataset_bytes(samples);
  std::istringstream in(bytes);
  EXPECT_EQ(dataset_bytes(read_dataset(in)), bytes);
}

TEST(Generator, ExternalCommandAdapter) {
  if (std::system("python3 -c 'pass' >/dev/null 2>&1") != 0) GTEST_SKIP() << "python3 not available";
  const std::string script = ::testing::TempDir() + "toolgym_echo_gen.py";
  {
    std::ofstream f(script);
    f << "import json, sys\n"
         "req = json.load(sys.stdin)\n"
         "steps = req['trace']['steps']\n"
         "chosen = [{k: v for k, v in s['arguments'].items() if k not in s['dependency_params']} for s in steps]\n"
         "print(json.dumps({'query': 'external: ' + req['trace']['template_id'], 'chosen_parameters': chosen,\n"
         "                  'variation_notes': str(len(req['user']))}))\n";
  }
  const Trace trace = car_rental_trace();
  ExecGenerator gen("python3 " + script);
  const QueryDraft d = generate_query(trace, gen);
  EXPECT_EQ(d.query, "external: car_rental_packages");
  EXPECT_TRUE(verify_echo_back(d, trace));

  ExecGenerator failing("python3 -c 'import sys; sys.exit(3)'");
  EXPECT_THROW(generate_query(trace, failing), GeneratorError);
  ExecGenerator garbage("echo not-json");
  EXPECT_THROW(generate_query(trace, garbage), GeneratorError);
  std::remove(script.c_str());
}

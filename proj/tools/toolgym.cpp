#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "toolgym/bench.hpp"
#include "toolgym/complexfuncbench.hpp"
#include "toolgym/errors.hpp"
#include "toolgym/expand.hpp"
#include "toolgym/inverted_index.hpp"
#include "toolgym/mock_upstream.hpp"
#include "toolgym/scoring.hpp"
#include "toolgym/service.hpp"
#include "toolgym/synthesizer.hpp"

namespace fs = std::filesystem;
using namespace toolgym;

namespace {

int log_level() {
  const char* v = std::getenv("TOOLGYM_LOG");
  return v == nullptr ? 1 : std::atoi(v);
}

void info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "toolgym: " << msg << '\n';
}

std::string error_type(const std::exception& e) {
  if (dynamic_cast<const SchemaError*>(&e)) return "SchemaError";
  if (dynamic_cast<const CycleError*>(&e)) return "CycleError";
  if (dynamic_cast<const PathSyntaxError*>(&e)) return "PathSyntaxError";
  if (dynamic_cast<const PathNotFound*>(&e)) return "PathNotFound";
  if (dynamic_cast<const ConflictError*>(&e)) return "ConflictError";
  if (dynamic_cast<const UpstreamError*>(&e)) return "UpstreamError";
  if (dynamic_cast<const ClosureError*>(&e)) return "ClosureError";
  if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
  if (dynamic_cast<const GeneratorError*>(&e)) return "GeneratorError";
  if (dynamic_cast<const Value::exception*>(&e)) return "JsonError";
  if (dynamic_cast<const Error*>(&e)) return "Error";
  return "InternalError";
}

void write_json(const Value& doc, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << doc.dump(2) << '\n';
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw Error("cannot write " + out_path);
  out << doc.dump(2) << '\n';
}

std::shared_ptr<const Environment> load_env(const std::string& cache, const std::string& registry) {
  if (cache.empty() || registry.empty()) return nullptr;
  return std::make_shared<const Environment>(std::make_shared<const CacheStore>(CacheStore::load(fs::path(cache))),
                                             std::make_shared<const Registry>(Registry::load(registry)));
}

std::vector<DatasetSample> load_samples(const std::string& path, const std::string& format) {
  if (format == "complexfuncbench") return load_cfb_dataset(path);
  return load_dataset(path);
}

void announce_seed(const std::string& cmd, std::uint64_t seed) { std::cerr << "toolgym " << cmd << ": seed=" << seed << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic tool-orchestration environment, synthesis and scoring"};
  app.set_version_flag("--version", TOOLGYM_VERSION);
  app.require_subcommand(1);

  // cache build
  auto* cache = app.add_subcommand("cache", "Cache snapshot operations");
  cache->require_subcommand(1);
  auto* build = cache->add_subcommand("build", "Collect chains from an upstream into a cache snapshot");
  std::string upstream = "mock", mock_path, templates_dir, out_path;
  int breadth = 10;
  std::uint64_t seed = 0;
  build->add_option("--upstream", upstream, "Upstream kind")->check(CLI::IsMember({"mock"}));
  build->add_option("--mock", mock_path, "Mock domain file")->check(CLI::ExistingFile);
  build->add_option("--templates", templates_dir, "Template directory")->required()->check(CLI::ExistingDirectory);
  build->add_option("--breadth", breadth, "Chains per template")->check(CLI::NonNegativeNumber);
  build->add_option("--seed", seed, "Seed");
  build->add_option("--out", out_path, "Output snapshot")->required();

  // synth
  auto* synth = app.add_subcommand("synth", "Synthesize a dataset from templates and a cache");
  std::string cache_path, registry_path, generator_spec = "fallback", report_path;
  int per_template = 3, max_restarts = kDefaultMaxRestarts;
  synth->add_option("--templates", templates_dir, "Template directory")->required()->check(CLI::ExistingDirectory);
  synth->add_option("--cache", cache_path, "Cache snapshot")->required()->check(CLI::ExistingFile);
  synth->add_option("--registry", registry_path, "Function registry")->required()->check(CLI::ExistingFile);
  synth->add_option("--per-template", per_template, "Samples attempted per template")->check(CLI::NonNegativeNumber);
  synth->add_option("--max-restarts", max_restarts, "Sampling restarts before giving up");
  synth->add_option("--seed", seed, "Seed");
  synth->add_option("--generator", generator_spec, "fallback or exec:CMD");
  synth->add_option("--out", out_path, "Output dataset")->required();
  synth->add_option("--report", report_path, "Synthesis report output (default stdout)");

  // score / eval
  std::string dataset_path, predictions_path, format = "native";
  double lambda = kDefaultLambda;
  int max_turns = kDefaultMaxTurns;
  auto* score = app.add_subcommand("score", "Reward reports for predicted transcripts");
  auto* eval = app.add_subcommand("eval", "Turn/call accuracy, strata and error taxonomy");
  for (auto* sc : {score, eval}) {
    sc->add_option("--dataset", dataset_path, "Dataset file")->required()->check(CLI::ExistingFile);
    sc->add_option("--predictions", predictions_path, "Predictions file")->required()->check(CLI::ExistingFile);
    sc->add_option("--cache", cache_path, "Cache snapshot, to execute predictions without observations");
    sc->add_option("--registry", registry_path, "Function registry");
    sc->add_option("--format", format, "Dataset format")->check(CLI::IsMember({"native", "complexfuncbench"}));
    sc->add_option("--max-turns", max_turns, "Turn limit when rolling out raw messages");
    sc->add_option("--seed", seed, "Seed (recorded only; scoring is deterministic)");
    sc->add_option("--out", out_path, "Output report (default stdout)");
  }
  score->add_option("--lambda", lambda, "Atomic/orchestration weight")->check(CLI::Range(0.0, 1.0));
  std::string table_path;
  eval->add_option("--table", table_path, "Also write the plain-text table here ('-' for stderr)");

  // serve
  auto* serve = app.add_subcommand("serve", "Serve episodes over the line protocol");
  std::string config_path, listen, prompt_path;
  std::optional<double> serve_lambda;
  std::optional<int> serve_max_turns;
  std::optional<std::uint64_t> serve_seed;
  serve->add_option("--config", config_path, "Service config file")->check(CLI::ExistingFile);
  serve->add_option("--cache", cache_path, "Cache snapshot");
  serve->add_option("--registry", registry_path, "Function registry");
  serve->add_option("--dataset", dataset_path, "Dataset file");
  serve->add_option("--templates", templates_dir, "Template directory");
  serve->add_option("--system-prompt", prompt_path, "System prompt file");
  serve->add_option("--listen", listen, "stdio or HOST:PORT");
  serve->add_option("--lambda", serve_lambda, "Atomic/orchestration weight")->check(CLI::Range(0.0, 1.0));
  serve->add_option("--max-turns", serve_max_turns, "Turn limit per episode");
  serve->add_option("--seed", serve_seed, "Seed for session ids");

  // bench
  auto* bench = app.add_subcommand("bench", "Lookup and reward throughput on a synthetic cache");
  std::size_t entries = 100000, lookups = 500000, reward_evals = 50000;
  bench->add_option("--entries", entries, "Cache size");
  bench->add_option("--lookups", lookups, "Timed lookups");
  bench->add_option("--reward-evals", reward_evals, "Timed reward evaluations");
  bench->add_option("--seed", seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help, --version
    Value err{{"error", {{"type", "UsageError"}, {"message", e.what()}}}};
    std::cerr << err.dump(-1, ' ', false, Value::error_handler_t::replace) << '\n';
    return 1;
  }

  try {
    if (build->parsed()) {
      announce_seed("cache build", seed);
      if (mock_path.empty()) throw Error("--upstream mock needs --mock FILE");
      const MockDomain mock = MockDomain::load(mock_path);
      const auto templates = load_templates(templates_dir);
      CacheBuilder builder;
      Value per = Value::object();
      for (const auto& t : templates) {
        const auto added = expand_workflow(t, mock, mock, builder, breadth, seed);
        per[t.id] = added.size();
      }
      const CacheStore store = std::move(builder).freeze();
      store.save(fs::path(out_path));
      write_json(Value{{"seed", seed}, {"entries", store.size()}, {"templates", templates.size()},
                       {"breadth", breadth}, {"new_entries", per}, {"out", out_path}},
                 "-");
    } else if (synth->parsed()) {
      announce_seed("synth", seed);
      auto store = std::make_shared<const CacheStore>(CacheStore::load(fs::path(cache_path)));
      auto registry = std::make_shared<const Registry>(Registry::load(registry_path));
      const Environment env(store, registry);
      const InvertedIndex index = InvertedIndex::build(*store);
      const auto templates = load_templates(templates_dir);
      std::unique_ptr<Generator> gen;
      if (generator_spec == "fallback") {
        gen = std::make_unique<FallbackGenerator>(registry.get());
      } else if (generator_spec.rfind("exec:", 0) == 0 && generator_spec.size() > 5) {
        gen = std::make_unique<ExecGenerator>(generator_spec.substr(5));
      } else {
        throw Error("--generator must be 'fallback' or 'exec:CMD'");
      }
      SynthesisOptions opt;
      opt.per_template = per_template;
      opt.seed = seed;
      opt.max_restarts = max_restarts;
      const SynthesisResult result = synthesize_dataset(templates, env, index, *gen, opt);
      {
        std::ofstream out(out_path);
        if (!out) throw Error("cannot write " + out_path);
        write_dataset(out, result.samples);
      }
      Value report = result.report.to_json();
      report["seed"] = seed;
      report["generator"] = gen->id();
      report["out"] = out_path;
      write_json(report, report_path);
    } else if (score->parsed() || eval->parsed()) {
      announce_seed(score->parsed() ? "score" : "eval", seed);
      const auto env = load_env(cache_path, registry_path);
      const auto dataset = load_samples(dataset_path, format);
      const auto predictions = load_predictions(predictions_path);
      if (score->parsed()) {
        Value doc = score_predictions(dataset, predictions, env.get(), lambda, max_turns).to_json();
        doc["seed"] = seed;
        write_json(doc, out_path);
      } else {
        const EvalReport report = evaluate_predictions(dataset, predictions, env.get(), max_turns);
        Value doc = report.to_json();
        doc["seed"] = seed;
        write_json(doc, out_path);
        if (table_path == "-") {
          std::cerr << report.table();
        } else if (!table_path.empty()) {
          std::ofstream(table_path) << report.table();
        } else if (!out_path.empty() && out_path != "-") {
          std::cout << report.table();
        }
      }
    } else if (serve->parsed()) {
      ServiceConfig cfg = config_path.empty() ? ServiceConfig{} : ServiceConfig::load(config_path);
      if (!cache_path.empty()) cfg.cache_path = cache_path;
      if (!registry_path.empty()) cfg.registry_path = registry_path;
      if (!dataset_path.empty()) cfg.dataset_path = dataset_path;
      if (!templates_dir.empty()) cfg.templates_dir = templates_dir;
      if (!prompt_path.empty()) cfg.system_prompt_path = prompt_path;
      if (!listen.empty()) cfg.listen = listen;
      if (serve_lambda) cfg.lambda = *serve_lambda;
      if (serve_max_turns) cfg.max_turns = *serve_max_turns;
      if (serve_seed) cfg.seed = *serve_seed;
      announce_seed("serve", cfg.seed);
      if (cfg.cache_path.empty() || cfg.registry_path.empty() || cfg.dataset_path.empty()) {
        throw Error("serve needs cache_path, registry_path and dataset_path (flags or --config)");
      }
      if (!cfg.templates_dir.empty()) load_templates(cfg.templates_dir);  // fail fast on a broken template set
      const auto env = load_env(cfg.cache_path, cfg.registry_path);
      std::string prompt = kDefaultSystemPrompt;
      if (!cfg.system_prompt_path.empty()) {
        std::ifstream in(cfg.system_prompt_path);
        if (!in) throw Error("cannot open " + cfg.system_prompt_path);
        prompt.assign(std::istreambuf_iterator<char>(in), {});
        while (!prompt.empty() && prompt.back() == '\n') prompt.pop_back();
      }
      Server server(env, load_dataset(cfg.dataset_path), prompt, cfg.lambda, cfg.max_turns, cfg.seed);
      info("serving " + std::to_string(server.dataset().size()) + " samples, " +
           std::to_string(env->store().size()) + " cache entries on " + cfg.listen);
      if (cfg.listen == "stdio") {
        std::ios::sync_with_stdio(false);
        serve_stream(server, std::cin, std::cout);
      } else {
        const auto [host, port] = parse_listen_address(cfg.listen);
        serve_tcp(server, host, port);
      }
    } else if (bench->parsed()) {
      announce_seed("bench", seed);
      const CacheStore store = make_synthetic_cache(entries, seed);
      const ThroughputResult r = measure_throughput(store, seed, lookups, reward_evals);
      write_json(r.to_json(), "-");
    }
  } catch (const std::exception& e) {
    Value err{{"error", {{"type", error_type(e)}, {"message", e.what()}}}};
    std::cerr << err.dump(-1, ' ', false, Value::error_handler_t::replace) << '\n';
    return 1;
  }
  return 0;
}

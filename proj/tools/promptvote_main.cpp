// promptvote: evaluate datasets with synthesized in-context examples,
// input paraphrasing, and repeated-run majority voting.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "promptvote/digest.hpp"
#include "promptvote/errors.hpp"
#include "promptvote/manifest.hpp"
#include "promptvote/mock_backend.hpp"
#include "promptvote/pipeline.hpp"
#include "promptvote/sweep.hpp"

namespace fs = std::filesystem;
using namespace promptvote;

namespace {

struct EndpointFlags {
  std::string mock_script;
  std::string gen_url, eval_url;
  std::string gen_model, eval_model;
  std::string gen_key_env = "PROMPTVOTE_GEN_API_KEY";
  std::string eval_key_env = "PROMPTVOTE_EVAL_API_KEY";
  double gen_temperature = 0.7;
  double eval_temperature = 0.0;
  int max_tokens = 512;
  std::string cache_dir;
  int max_inflight = 8;
};

void add_endpoint_flags(CLI::App* cmd, EndpointFlags& flags) {
  cmd->add_option("--mock", flags.mock_script,
                  "Mock backend script (JSON); runs fully offline");
  cmd->add_option("--gen-url", flags.gen_url,
                  "Generator base URL, e.g. http://localhost:8000/v1");
  cmd->add_option("--eval-url", flags.eval_url, "Evaluator base URL");
  cmd->add_option("--gen-model", flags.gen_model, "Generator model name");
  cmd->add_option("--eval-model", flags.eval_model, "Evaluator model name");
  cmd->add_option("--gen-key-env", flags.gen_key_env,
                  "Env var holding the generator API key");
  cmd->add_option("--eval-key-env", flags.eval_key_env,
                  "Env var holding the evaluator API key");
  cmd->add_option("--gen-temperature", flags.gen_temperature, "Generator temperature");
  cmd->add_option("--eval-temperature", flags.eval_temperature, "Evaluator temperature");
  cmd->add_option("--max-tokens", flags.max_tokens, "Per-call completion token cap");
  cmd->add_option("--cache-dir", flags.cache_dir,
                  "Response cache directory (evaluator calls only)");
  cmd->add_option("--max-inflight", flags.max_inflight,
                  "Concurrent requests allowed per endpoint");
}

Gateway make_gateway(const EndpointFlags& flags) {
  ModelEndpoint generator;
  generator.role = Role::GENERATOR;
  ModelEndpoint evaluator;
  evaluator.role = Role::EVALUATOR;
  generator.temperature = flags.gen_temperature;
  evaluator.temperature = flags.eval_temperature;
  generator.max_tokens = evaluator.max_tokens = flags.max_tokens;

  GatewayConfig config;
  config.cache_dir = flags.cache_dir;
  config.max_inflight_per_endpoint = flags.max_inflight;

  if (!flags.mock_script.empty()) {
    generator.model_name = "mock-generator";
    evaluator.model_name = "mock-evaluator";
    config.backoff_base_ms = 1;
    return Gateway(generator, evaluator,
                   make_mock_backend(MockScript::from_file(flags.mock_script)), config);
  }
  if (flags.gen_url.empty() || flags.eval_url.empty() || flags.gen_model.empty() ||
      flags.eval_model.empty())
    throw CLI::ValidationError(
        "endpoints", "provide --mock or all of --gen-url/--eval-url/--gen-model/--eval-model");
  generator.base_url = flags.gen_url;
  generator.model_name = flags.gen_model;
  generator.api_key_env = flags.gen_key_env;
  evaluator.base_url = flags.eval_url;
  evaluator.model_name = flags.eval_model;
  evaluator.api_key_env = flags.eval_key_env;
  return Gateway(generator, evaluator, make_http_backend(), config);
}

std::string default_out_dir(const RunConfig& config) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char stamp[32];
  std::tm tm_buf{};
  gmtime_r(&t, &tm_buf);
  std::strftime(stamp, sizeof(stamp), "%Y%m%d-%H%M%S", &tm_buf);
  std::ostringstream key;
  key << config.task_id << ':' << config.n << ':' << config.k << ':' << config.r << ':'
      << config.seed;
  return "runs/" + std::string(stamp) + "-" + sha256_hex(key.str()).substr(0, 8);
}

std::vector<int> parse_int_list(const std::string& csv, const char* what) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stoi(item));
  if (out.empty())
    throw CLI::ValidationError(what, "expected a comma-separated list of integers");
  return out;
}

void print_report(const Report& report) {
  std::printf(
      "instances=%d scored=%d aborted=%d accuracy=%.4f tie_rate=%.4f abstain_rate=%.4f\n",
      report.instances, report.scored, report.aborted, report.accuracy, report.tie_rate,
      report.abstain_rate);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Per-input prompt construction and majority-vote evaluation"};
  app.require_subcommand(1);

  EndpointFlags endpoints;
  RunConfig config;
  std::string dataset_path, out_dir, regen = "per-repeat", shortfall = "abort";
  int limit = 0;

  auto add_run_flags = [&](CLI::App* cmd) {
    cmd->add_option("--task", config.task_id, "Task id (builtin name or spec file path)")
        ->required();
    cmd->add_option("--dataset", dataset_path, "Dataset (line-delimited JSON)")->required();
    cmd->add_option("--n", config.n,
                    "Paraphrases per input (n=5 with --k 8 is a good cheaper "
                    "operating point; default matches the full setting)");
    cmd->add_option("--k", config.k,
                    "Synthesized in-context examples per prompt (see --n for the "
                    "cheaper n=5, k=8 operating point)");
    cmd->add_option("--r", config.r, "Independent voting runs per input");
    cmd->add_option("--seed", config.seed, "Master seed");
    cmd->add_option("--limit", limit, "Evaluate only the first N instances");
    cmd->add_option("--concurrency", config.concurrency, "Instances processed in parallel");
    cmd->add_option("--regen", regen, "Example regeneration: per-repeat | once")
        ->check(CLI::IsMember({"per-repeat", "once"}));
    cmd->add_option("--shortfall", shortfall,
                    "On paraphrase undersupply: abort | pad-with-original")
        ->check(CLI::IsMember({"abort", "pad-with-original"}));
    cmd->add_option("--max-topup-rounds", config.max_topup_rounds,
                    "Extra generation rounds when examples fail validation");
    add_endpoint_flags(cmd, endpoints);
  };

  CLI::App* run_cmd = app.add_subcommand("run", "Evaluate a dataset and write a manifest");
  add_run_flags(run_cmd);
  run_cmd->add_option("--out", out_dir, "Output directory (default runs/<stamp>-<digest>)");

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Grid-sweep n and k across seeds, emit a CSV");
  std::string grid_n_csv = "0,1,2,5,10,15", grid_k_csv = "4,8,12,16,32",
              seeds_csv = "1,2,3", csv_path = "sweep.csv";
  add_run_flags(sweep_cmd);
  sweep_cmd->add_option("--grid-n", grid_n_csv, "Comma-separated n values (outer loop)");
  sweep_cmd->add_option("--grid-k", grid_k_csv, "Comma-separated k values (inner loop)");
  sweep_cmd->add_option("--seeds", seeds_csv, "Comma-separated master seeds");
  sweep_cmd->add_option("--csv", csv_path, "Output CSV path");

  CLI::App* score_cmd =
      app.add_subcommand("score", "Recompute statistics from a manifest and verify it");
  std::string manifest_path;
  score_cmd->add_option("manifest", manifest_path, "Manifest file")->required();

  CLI::App* inspect_cmd =
      app.add_subcommand("inspect", "Print per-instance verdicts from a manifest");
  std::string inspect_path;
  inspect_cmd->add_option("manifest", inspect_path, "Manifest file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (limit > 0) config.limit = limit;
    config.example_regen = regen == "once" ? RegenPolicy::ONCE : RegenPolicy::PER_REPEAT;
    config.shortfall = shortfall == "pad-with-original" ? ShortfallPolicy::PAD_WITH_ORIGINAL
                                                        : ShortfallPolicy::ABORT;

    if (run_cmd->parsed()) {
      Gateway gateway = make_gateway(endpoints);
      const TaskSpec spec = load_task(config.task_id);
      std::vector<Instance> dataset = ingest_dataset(dataset_path, spec);
      if (out_dir.empty()) out_dir = default_out_dir(config);
      fs::create_directories(out_dir);
      const std::string manifest = (fs::path(out_dir) / "manifest.jsonl").string();
      RunManifest result = run_dataset(config, dataset, gateway, manifest);
      const RunSummary& s = result.summary;
      std::printf(
          "task=%s n=%d k=%d r=%d instances=%d accuracy=%.4f aborted=%d ties=%d "
          "manifest=%s\n",
          config.task_id.c_str(), config.n, config.k, config.r, s.instances, s.accuracy,
          s.aborted, s.ties, manifest.c_str());
    } else if (sweep_cmd->parsed()) {
      Gateway gateway = make_gateway(endpoints);
      const TaskSpec spec = load_task(config.task_id);
      std::vector<Instance> dataset = ingest_dataset(dataset_path, spec);
      SweepConfig sweep;
      sweep.base = config;
      sweep.grid_n = parse_int_list(grid_n_csv, "--grid-n");
      sweep.grid_k = parse_int_list(grid_k_csv, "--grid-k");
      for (int s : parse_int_list(seeds_csv, "--seeds"))
        sweep.seeds.push_back(static_cast<std::uint64_t>(s));
      std::vector<SweepRow> rows = run_sweep(sweep, dataset, gateway);
      write_sweep_csv(rows, csv_path);
      std::printf("wrote %zu rows to %s\n", rows.size(), csv_path.c_str());
    } else if (score_cmd->parsed()) {
      print_report(score_manifest(manifest_path));
    } else if (inspect_cmd->parsed()) {
      RunManifest manifest = read_manifest(inspect_path);
      std::printf("task=%s n=%d k=%d r=%d\n", manifest.config.task_id.c_str(),
                  manifest.config.n, manifest.config.k, manifest.config.r);
      for (const auto& inst : manifest.instances) {
        if (inst.aborted)
          std::printf("%-24s ABORTED  %s\n", inst.instance_id.c_str(),
                      inst.abort_reason.c_str());
        else
          std::printf("%-24s gold=%-12s winner=%-12s %s%s abstain=%d\n",
                      inst.instance_id.c_str(), inst.gold.c_str(), inst.winner.c_str(),
                      inst.correct ? "correct" : "wrong",
                      inst.tie_broken ? " (tie-broken)" : "", inst.abstentions);
      }
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

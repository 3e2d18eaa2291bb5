#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "promptvote/errors.hpp"
#include "promptvote/manifest.hpp"
#include "promptvote/mock_backend.hpp"
#include "promptvote/pipeline.hpp"
#include "promptvote/sweep.hpp"

using namespace promptvote;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const std::string kDataDir = std::string(PV_TEST_DIR) + "/data";

Gateway echo_gateway(double echo_prob = 1.0, std::uint64_t seed = 7) {
  MockScript script;
  script.seed = seed;
  script.evaluate.mode = MockPurposeConfig::Mode::ECHO;
  script.evaluate.echo_prob = echo_prob;
  script.evaluate.labels = {"positive", "negative"};
  ModelEndpoint gen;
  gen.role = Role::GENERATOR;
  gen.model_name = "gen-m";
  ModelEndpoint eval;
  eval.role = Role::EVALUATOR;
  eval.model_name = "eval-m";
  GatewayConfig cfg;
  cfg.backoff_base_ms = 1;
  return Gateway(gen, eval, make_mock_backend(std::move(script)), cfg);
}

std::string write_temp(const std::string& name, const std::string& content) {
  const fs::path path = fs::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path.string();
}

// Manifest lines with timing fields removed, for byte-determinism comparison.
std::string stable_view(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    json j = json::parse(line);
    for (const char* field : {"latency_ms", "gen_ms", "para_ms", "eval_ms", "wall_ms"})
      j.erase(field);
    out << j.dump() << '\n';
  }
  return out.str();
}

RunConfig small_config() {
  RunConfig config;
  config.task_id = "sst2";
  config.n = 2;
  config.k = 4;
  config.r = 3;
  config.seed = 21;
  return config;
}

}  // namespace

TEST_CASE("dataset ingestion normalizes gold answers") {
  TaskSpec sst2 = load_task("sst2");
  std::vector<Instance> instances =
      ingest_dataset(kDataDir + "/sst2_tiny.jsonl", sst2);
  REQUIRE(instances.size() == 4);
  CHECK(instances[0].id == "s1");
  CHECK(instances[0].gold == "positive");
  CHECK(instances[1].gold == "negative");

  TaskSpec gsm8k = load_task("gsm8k");
  const std::string math_path = write_temp(
      "pv_gsm8k.jsonl",
      "{\"question\": \"Tom buys 6 packs of 7 cards. How many cards?\", \"answer\": \"#### 42\"}\n");
  std::vector<Instance> math = ingest_dataset(math_path, gsm8k);
  REQUIRE(math.size() == 1);
  CHECK(math[0].gold == "42");
  CHECK(math[0].id == "line1");
}

TEST_CASE("malformed dataset records are rejected with their line number") {
  TaskSpec sst2 = load_task("sst2");
  const std::string path = write_temp(
      "pv_bad.jsonl",
      "{\"id\": \"ok\", \"text\": \"positive vibes\", \"label\": \"positive\"}\n"
      "{\"id\": \"bad\", \"text\": \"no label here\"}\n");
  try {
    ingest_dataset(path, sst2);
    FAIL("expected RECORD_MALFORMED");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RECORD_MALFORMED);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("a perfect echo evaluator yields perfect voted accuracy") {
  TaskSpec sst2 = load_task("sst2");
  std::vector<Instance> dataset = ingest_dataset(kDataDir + "/sst2_tiny.jsonl", sst2);
  Gateway gateway = echo_gateway();
  RunConfig config = small_config();
  RunManifest manifest = run_dataset(config, dataset, gateway);
  CHECK(manifest.summary.accuracy == 1.0);
  CHECK(manifest.summary.aborted == 0);
  // (n+1)*r evaluator calls per instance.
  CHECK(gateway.stats(Purpose::EVALUATE).calls ==
        static_cast<long>(dataset.size()) * (config.n + 1) * config.r);
  CHECK(manifest.summary.total_votes ==
        static_cast<long>(dataset.size()) * (config.n + 1) * config.r);
}

TEST_CASE("example regeneration policy controls generator call volume") {
  TaskSpec sst2 = load_task("sst2");
  std::vector<Instance> dataset = ingest_dataset(kDataDir + "/sst2_tiny.jsonl", sst2);

  RunConfig config = small_config();
  Gateway per_repeat = echo_gateway();
  run_dataset(config, dataset, per_repeat);
  // One request per label, per run, per instance.
  CHECK(per_repeat.stats(Purpose::GEN_EXAMPLES).calls ==
        static_cast<long>(dataset.size()) * config.r * 2);

  config.example_regen = RegenPolicy::ONCE;
  Gateway once = echo_gateway();
  run_dataset(config, dataset, once);
  CHECK(once.stats(Purpose::GEN_EXAMPLES).calls == 2);  // one shared prefix
}

TEST_CASE("limit restricts how many instances are evaluated") {
  TaskSpec sst2 = load_task("sst2");
  std::vector<Instance> dataset = ingest_dataset(kDataDir + "/sst2_tiny.jsonl", sst2);
  RunConfig config = small_config();
  config.limit = 2;
  Gateway gateway = echo_gateway();
  RunManifest manifest = run_dataset(config, dataset, gateway);
  CHECK(manifest.summary.instances == 2);
}

TEST_CASE("identical runs write identical manifests modulo timing") {
  TaskSpec sst2 = load_task("sst2");
  std::vector<Instance> dataset = ingest_dataset(kDataDir + "/sst2_tiny.jsonl", sst2);
  RunConfig config = small_config();
  config.concurrency = 4;  // determinism must survive concurrent instance workers

  const std::string path_a = write_temp("pv_manifest_a.jsonl", "");
  const std::string path_b = write_temp("pv_manifest_b.jsonl", "");
  Gateway gateway_a = echo_gateway(0.8);
  run_dataset(config, dataset, gateway_a, path_a);
  Gateway gateway_b = echo_gateway(0.8);
  run_dataset(config, dataset, gateway_b, path_b);
  CHECK(stable_view(path_a) == stable_view(path_b));
}

TEST_CASE("score recomputes exactly what the run reported") {
  TaskSpec sst2 = load_task("sst2");
  std::vector<Instance> dataset = ingest_dataset(kDataDir + "/sst2_tiny.jsonl", sst2);
  RunConfig config = small_config();
  const std::string path = write_temp("pv_manifest_score.jsonl", "");
  Gateway gateway = echo_gateway(0.7);
  RunManifest manifest = run_dataset(config, dataset, gateway, path);

  Report report = score_manifest(path);
  CHECK(report.instances == manifest.summary.instances);
  CHECK(report.accuracy == doctest::Approx(manifest.summary.accuracy));
  CHECK(report.total_votes == manifest.summary.total_votes);
}

TEST_CASE("a deleted vote row is detected as corruption") {
  TaskSpec sst2 = load_task("sst2");
  std::vector<Instance> dataset = ingest_dataset(kDataDir + "/sst2_tiny.jsonl", sst2);
  RunConfig config = small_config();
  const std::string path = write_temp("pv_manifest_corrupt.jsonl", "");
  Gateway gateway = echo_gateway();
  run_dataset(config, dataset, gateway, path);

  // Drop the first vote record.
  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string line;
  bool dropped = false;
  while (std::getline(in, line)) {
    if (!dropped && line.find("\"record\":\"vote\"") != std::string::npos) {
      dropped = true;
      continue;
    }
    lines.push_back(line);
  }
  in.close();
  REQUIRE(dropped);
  std::ofstream out(path);
  for (const auto& l : lines) out << l << '\n';
  out.close();

  try {
    score_manifest(path);
    FAIL("expected MANIFEST_CORRUPT");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MANIFEST_CORRUPT);
  }
}

TEST_CASE("a tampered winner is detected as corruption") {
  TaskSpec sst2 = load_task("sst2");
  std::vector<Instance> dataset = ingest_dataset(kDataDir + "/sst2_tiny.jsonl", sst2);
  RunConfig config = small_config();
  const std::string path = write_temp("pv_manifest_tamper.jsonl", "");
  Gateway gateway = echo_gateway();
  run_dataset(config, dataset, gateway, path);

  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string line;
  bool tampered = false;
  while (std::getline(in, line)) {
    if (!tampered && line.find("\"record\":\"instance\"") != std::string::npos) {
      json j = json::parse(line);
      j["winner"] = j["winner"] == "positive" ? "negative" : "positive";
      line = j.dump();
      tampered = true;
    }
    lines.push_back(line);
  }
  in.close();
  REQUIRE(tampered);
  std::ofstream out(path);
  for (const auto& l : lines) out << l << '\n';
  out.close();

  CHECK_THROWS_AS(score_manifest(path), Error);
}

TEST_CASE("sweep emits one row per grid cell in n-major order") {
  TaskSpec sst2 = load_task("sst2");
  std::vector<Instance> dataset = ingest_dataset(kDataDir + "/sst2_tiny.jsonl", sst2);

  SweepConfig sweep;
  sweep.base = small_config();
  sweep.base.r = 1;
  sweep.grid_n = {0, 2};
  sweep.grid_k = {2, 4, 6};
  sweep.seeds = {1, 2};
  Gateway gateway = echo_gateway();
  std::vector<SweepRow> rows = run_sweep(sweep, dataset, gateway);
  REQUIRE(rows.size() == 6);
  const int expected[6][2] = {{0, 2}, {0, 4}, {0, 6}, {2, 2}, {2, 4}, {2, 6}};
  for (int i = 0; i < 6; ++i) {
    CHECK(rows[static_cast<std::size_t>(i)].n == expected[i][0]);
    CHECK(rows[static_cast<std::size_t>(i)].k == expected[i][1]);
    CHECK(rows[static_cast<std::size_t>(i)].mean == 1.0);  // perfect echo evaluator
    CHECK(rows[static_cast<std::size_t>(i)].deviation == 0.0);
    CHECK(rows[static_cast<std::size_t>(i)].failures == 0);
  }

  const std::string csv_path = write_temp("pv_sweep.csv", "");
  write_sweep_csv(rows, csv_path);
  std::ifstream csv(csv_path);
  std::string header;
  std::getline(csv, header);
  CHECK(header == "n,k,mean,deviation");
  int data_rows = 0;
  std::string row;
  while (std::getline(csv, row))
    if (!row.empty()) ++data_rows;
  CHECK(data_rows == 6);
}

TEST_CASE("invalid run configurations are rejected") {
  RunConfig config;  // no task
  CHECK_THROWS_AS(config.validate(), Error);
  config.task_id = "sst2";
  CHECK_NOTHROW(config.validate());
  config.r = 0;
  CHECK_THROWS_AS(config.validate(), Error);
}

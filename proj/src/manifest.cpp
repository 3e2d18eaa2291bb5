#include "promptvote/manifest.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"
#include "promptvote/errors.hpp"

namespace promptvote {

using json = nlohmann::json;

namespace manifest_io {

std::string header_line(const RunConfig& config) {
  json j{{"record", "header"},
         {"task", config.task_id},
         {"n", config.n},
         {"k", config.k},
         {"r", config.r},
         {"seed", config.seed},
         {"example_regen", regen_policy_name(config.example_regen)},
         {"concurrency", config.concurrency},
         {"max_topup_rounds", config.max_topup_rounds}};
  if (config.limit) j["limit"] = *config.limit;
  return j.dump();
}

std::string vote_line(const TimedVote& vote) {
  json j{{"record", "vote"},
         {"instance", vote.vote.instance_id},
         {"run", vote.vote.run_index},
         {"variant", vote.vote.variant_index},
         {"raw", vote.vote.raw_text},
         {"norm", vote.vote.abstained() ? json() : json(vote.vote.normalized)},
         {"latency_ms", vote.latency_ms}};
  return j.dump();
}

std::string instance_line(const InstanceResult& result) {
  if (result.aborted) {
    json j{{"record", "abort"},
           {"instance", result.instance_id},
           {"gold", result.gold},
           {"reason", result.abort_reason},
           {"votes", result.votes.size()}};
    return j.dump();
  }
  json j{{"record", "instance"},
         {"instance", result.instance_id},
         {"gold", result.gold},
         {"winner", result.winner},
         {"tie_broken", result.tie_broken},
         {"abstentions", result.abstentions},
         {"correct", result.correct},
         {"votes", result.votes.size()},
         {"gen_ms", result.gen_ms},
         {"para_ms", result.para_ms},
         {"eval_ms", result.eval_ms}};
  return j.dump();
}

std::string summary_line(const RunSummary& summary) {
  json j{{"record", "summary"},
         {"instances", summary.instances},
         {"scored", summary.scored},
         {"correct", summary.correct_count},
         {"aborted", summary.aborted},
         {"ties", summary.ties},
         {"total_votes", summary.total_votes},
         {"abstain_votes", summary.abstain_votes},
         {"accuracy", summary.accuracy},
         {"calls", summary.calls},
         {"prompt_tokens", summary.prompt_tokens},
         {"completion_tokens", summary.completion_tokens},
         {"wall_ms",
          {{"gen", summary.wall_gen_ms},
           {"para", summary.wall_para_ms},
           {"eval", summary.wall_eval_ms},
           {"total", summary.wall_total_ms}}}};
  return j.dump();
}

}  // namespace manifest_io

namespace {

RegenPolicy regen_from_name(const std::string& name) {
  return name == "ONCE" ? RegenPolicy::ONCE : RegenPolicy::PER_REPEAT;
}

}  // namespace

RunManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw Error(ErrorCode::FILE_NOT_FOUND, "manifest '" + path + "'");

  RunManifest manifest;
  manifest.path = path;
  std::map<std::string, std::vector<TimedVote>> votes_by_instance;
  bool saw_header = false, saw_summary = false;

  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::MANIFEST_CORRUPT,
                  "line " + std::to_string(line_number) + ": " + e.what());
    }
    const std::string record = j.value("record", "");
    if (record == "header") {
      saw_header = true;
      manifest.config.task_id = j.value("task", "");
      manifest.config.n = j.value("n", 0);
      manifest.config.k = j.value("k", 1);
      manifest.config.r = j.value("r", 1);
      manifest.config.seed = j.value("seed", 0ULL);
      manifest.config.example_regen = regen_from_name(j.value("example_regen", "PER_REPEAT"));
      manifest.config.concurrency = j.value("concurrency", 1);
      manifest.config.max_topup_rounds = j.value("max_topup_rounds", 3);
      if (j.contains("limit")) manifest.config.limit = j["limit"].get<int>();
    } else if (record == "vote") {
      TimedVote vote;
      vote.vote.instance_id = j.at("instance").get<std::string>();
      vote.vote.run_index = j.at("run").get<int>();
      vote.vote.variant_index = j.at("variant").get<int>();
      vote.vote.raw_text = j.value("raw", "");
      vote.vote.normalized = j.at("norm").is_null() ? kAbstain : j["norm"].get<std::string>();
      vote.latency_ms = j.value("latency_ms", 0.0);
      votes_by_instance[vote.vote.instance_id].push_back(std::move(vote));
    } else if (record == "instance" || record == "abort") {
      InstanceResult result;
      result.instance_id = j.at("instance").get<std::string>();
      result.gold = j.value("gold", "");
      if (record == "abort") {
        result.aborted = true;
        result.abort_reason = j.value("reason", "");
      } else {
        result.winner = j.at("winner").get<std::string>();
        result.tie_broken = j.value("tie_broken", false);
        result.abstentions = j.value("abstentions", 0);
        result.correct = j.value("correct", false);
        result.gen_ms = j.value("gen_ms", 0.0);
        result.para_ms = j.value("para_ms", 0.0);
        result.eval_ms = j.value("eval_ms", 0.0);
      }
      auto it = votes_by_instance.find(result.instance_id);
      if (it != votes_by_instance.end()) result.votes = std::move(it->second);
      manifest.instances.push_back(std::move(result));
    } else if (record == "summary") {
      saw_summary = true;
      manifest.summary.instances = j.value("instances", 0);
      manifest.summary.scored = j.value("scored", 0);
      manifest.summary.correct_count = j.value("correct", 0);
      manifest.summary.aborted = j.value("aborted", 0);
      manifest.summary.ties = j.value("ties", 0);
      manifest.summary.total_votes = j.value("total_votes", 0L);
      manifest.summary.abstain_votes = j.value("abstain_votes", 0L);
      manifest.summary.accuracy = j.value("accuracy", 0.0);
      if (j.contains("calls"))
        manifest.summary.calls = j["calls"].get<std::map<std::string, long>>();
      manifest.summary.prompt_tokens = j.value("prompt_tokens", 0L);
      manifest.summary.completion_tokens = j.value("completion_tokens", 0L);
      if (j.contains("wall_ms")) {
        manifest.summary.wall_gen_ms = j["wall_ms"].value("gen", 0.0);
        manifest.summary.wall_para_ms = j["wall_ms"].value("para", 0.0);
        manifest.summary.wall_eval_ms = j["wall_ms"].value("eval", 0.0);
        manifest.summary.wall_total_ms = j["wall_ms"].value("total", 0.0);
      }
    } else {
      throw Error(ErrorCode::MANIFEST_CORRUPT,
                  "line " + std::to_string(line_number) + ": unknown record '" + record + "'");
    }
  }
  if (!saw_header) throw Error(ErrorCode::MANIFEST_CORRUPT, "missing header record");
  if (!saw_summary) throw Error(ErrorCode::MANIFEST_CORRUPT, "missing summary record");
  return manifest;
}

Report score_manifest(const std::string& path) {
  RunManifest manifest = read_manifest(path);
  const RunConfig& config = manifest.config;
  const long expected_votes =
      static_cast<long>(config.n + 1) * static_cast<long>(config.r);

  Report report;
  long abstain_votes = 0;
  int ties = 0;
  for (const auto& result : manifest.instances) {
    ++report.instances;
    report.total_votes += static_cast<long>(result.votes.size());
    if (result.aborted) {
      ++report.aborted;
      continue;
    }
    if (static_cast<long>(result.votes.size()) != expected_votes)
      throw Error(ErrorCode::MANIFEST_CORRUPT,
                  "instance '" + result.instance_id + "' has " +
                      std::to_string(result.votes.size()) + " vote rows, expected " +
                      std::to_string(expected_votes));
    std::vector<Vote> votes;
    votes.reserve(result.votes.size());
    for (const auto& timed : result.votes) votes.push_back(timed.vote);
    VoteTally verdict = tally(std::move(votes), config.n, config.r);
    if (verdict.winner != result.winner || verdict.tie_broken != result.tie_broken ||
        verdict.abstentions != result.abstentions ||
        (verdict.winner == result.gold) != result.correct)
      throw Error(ErrorCode::MANIFEST_CORRUPT,
                  "instance '" + result.instance_id + "' record disagrees with its vote rows");
    ++report.scored;
    if (result.correct) ++report.accuracy;  // counting; divided below
    if (result.tie_broken) ++ties;
    abstain_votes += verdict.abstentions;
  }
  const int correct = static_cast<int>(report.accuracy);
  report.accuracy = report.scored > 0 ? report.accuracy / report.scored : 0.0;
  report.tie_rate = report.scored > 0 ? static_cast<double>(ties) / report.scored : 0.0;
  report.abstain_rate =
      report.total_votes > 0 ? static_cast<double>(abstain_votes) / report.total_votes : 0.0;
  report.calls = manifest.summary.calls;
  report.prompt_tokens = manifest.summary.prompt_tokens;
  report.completion_tokens = manifest.summary.completion_tokens;
  report.wall_total_ms = manifest.summary.wall_total_ms;

  const RunSummary& stored = manifest.summary;
  if (stored.instances != report.instances || stored.scored != report.scored ||
      stored.correct_count != correct || stored.aborted != report.aborted ||
      stored.ties != ties || stored.abstain_votes != abstain_votes ||
      std::fabs(stored.accuracy - report.accuracy) > 1e-12)
    throw Error(ErrorCode::MANIFEST_CORRUPT, "summary record disagrees with vote rows");
  return report;
}

}  // namespace promptvote

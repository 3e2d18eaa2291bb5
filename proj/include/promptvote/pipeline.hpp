#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "promptvote/example_forge.hpp"
#include "promptvote/gateway.hpp"
#include "promptvote/paraphrase.hpp"
#include "promptvote/task_registry.hpp"
#include "promptvote/vote.hpp"

namespace promptvote {

enum class RegenPolicy {
  PER_REPEAT,  // fresh examples for every run (default)
  ONCE,        // one prefix for the whole dataset
};

const char* regen_policy_name(RegenPolicy policy);

struct RunConfig {
  std::string task_id;
  int n = 10;
  int k = 16;
  int r = 15;
  std::uint64_t seed = 0;
  RegenPolicy example_regen = RegenPolicy::PER_REPEAT;
  int concurrency = 1;
  std::optional<int> limit;
  ShortfallPolicy shortfall = ShortfallPolicy::ABORT;
  int max_topup_rounds = 3;

  void validate() const;  // throws CONFIG_INVALID
};

struct Instance {
  std::string id;
  std::string text;
  std::string gold;  // normalized
};

struct TimedVote {
  Vote vote;
  double latency_ms = 0.0;
};

struct InstanceResult {
  std::string instance_id;
  std::string gold;
  std::vector<TimedVote> votes;
  std::string winner;
  bool tie_broken = false;
  int abstentions = 0;
  bool correct = false;
  bool aborted = false;
  std::string abort_reason;
  double gen_ms = 0.0;
  double para_ms = 0.0;
  double eval_ms = 0.0;
};

struct RunSummary {
  int instances = 0;
  int scored = 0;
  int correct_count = 0;
  int aborted = 0;
  int ties = 0;
  long total_votes = 0;
  long abstain_votes = 0;
  double accuracy = 0.0;
  double wall_gen_ms = 0.0;
  double wall_para_ms = 0.0;
  double wall_eval_ms = 0.0;
  double wall_total_ms = 0.0;
  std::map<std::string, long> calls;  // keyed by purpose name
  long prompt_tokens = 0;
  long completion_tokens = 0;
};

struct RunManifest {
  RunConfig config;
  std::vector<InstanceResult> instances;
  RunSummary summary;
  std::string path;  // manifest file when persisted, "" otherwise
};

/// Line-delimited JSON records with fields text/label (classification) or
/// question/answer (math, MC). Gold answers pass through normalize().
std::vector<Instance> ingest_dataset(const std::string& path, const TaskSpec& spec);

/// Full evaluation loop. Instances run concurrently up to config.concurrency;
/// runs inside one instance are sequential. When manifest_path is non-empty
/// the manifest streams to disk as instances complete, in instance order.
RunManifest run_dataset(const RunConfig& config, const std::vector<Instance>& dataset,
                        Gateway& gateway, const std::string& manifest_path = "");

}  // namespace promptvote

#include "promptvote/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <fstream>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "promptvote/digest.hpp"
#include "promptvote/errors.hpp"
#include "promptvote/manifest.hpp"

namespace promptvote {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

const char* regen_policy_name(RegenPolicy policy) {
  return policy == RegenPolicy::PER_REPEAT ? "PER_REPEAT" : "ONCE";
}

void RunConfig::validate() const {
  if (task_id.empty()) throw Error(ErrorCode::CONFIG_INVALID, "missing task_id");
  if (n < 0) throw Error(ErrorCode::CONFIG_INVALID, "n must be >= 0");
  if (k < 1) throw Error(ErrorCode::CONFIG_INVALID, "k must be >= 1");
  if (r < 1) throw Error(ErrorCode::CONFIG_INVALID, "r must be >= 1");
  if (concurrency < 1) throw Error(ErrorCode::CONFIG_INVALID, "concurrency must be >= 1");
  if (limit && *limit < 1) throw Error(ErrorCode::CONFIG_INVALID, "limit must be >= 1");
}

std::vector<Instance> ingest_dataset(const std::string& path, const TaskSpec& spec) {
  std::ifstream in(path);
  if (!in.good()) throw Error(ErrorCode::FILE_NOT_FOUND, "dataset '" + path + "'");

  const bool question_form = spec.body_field == "Question";
  std::vector<Instance> out;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::RECORD_MALFORMED,
                  "line " + std::to_string(line_number) + ": " + e.what());
    }
    const char* text_key = question_form ? "question" : "text";
    const char* gold_key = question_form ? "answer" : "label";
    if (!j.contains(text_key) || !j.contains(gold_key))
      throw Error(ErrorCode::RECORD_MALFORMED,
                  "line " + std::to_string(line_number) + ": missing '" +
                      std::string(text_key) + "' or '" + gold_key + "'");
    Instance inst;
    inst.id = j.contains("id") ? j["id"].get<std::string>()
                               : "line" + std::to_string(line_number);
    inst.text = j[text_key].get<std::string>();
    std::string raw_gold = j[gold_key].is_string() ? j[gold_key].get<std::string>()
                                                   : j[gold_key].dump();
    inst.gold = normalize(raw_gold, spec);
    if (inst.text.empty() || inst.gold == kAbstain)
      throw Error(ErrorCode::RECORD_MALFORMED,
                  "line " + std::to_string(line_number) + ": empty text or unusable gold");
    out.push_back(std::move(inst));
  }
  return out;
}

namespace {

ContextPrefix forge_prefix(const TaskSpec& spec, const RunConfig& config,
                           const std::string& instance_key, int run_index,
                           Gateway& gateway) {
  const std::uint64_t gen_seed = derive_seed(config.seed, instance_key, run_index, "gen");
  ParseResult candidates = gen_examples(spec, config.k, gateway, gen_seed);
  std::vector<Example> examples = validate_and_topup(
      std::move(candidates), spec, config.k, gateway, gen_seed, config.max_topup_rounds);
  for (auto& example : examples) example.source_run = run_index;
  return assemble_prefix(spec, std::move(examples),
                         derive_seed(config.seed, instance_key, run_index, "shuffle"));
}

InstanceResult process_instance(const TaskSpec& spec, const RunConfig& config,
                                const Instance& instance, Gateway& gateway,
                                const ContextPrefix* shared_prefix) {
  InstanceResult result;
  result.instance_id = instance.id;
  result.gold = instance.gold;
  try {
    for (int run = 1; run <= config.r; ++run) {
      ContextPrefix local_prefix;
      const ContextPrefix* prefix = shared_prefix;
      if (!prefix) {
        auto start = Clock::now();
        local_prefix = forge_prefix(spec, config, instance.id, run, gateway);
        result.gen_ms += ms_since(start);
        prefix = &local_prefix;
      }

      auto para_start = Clock::now();
      CandidateSet candidates =
          paraphrase(spec, instance.text, config.n, gateway, config.shortfall);
      result.para_ms += ms_since(para_start);

      for (std::size_t variant = 0; variant < candidates.size(); ++variant) {
        ChatRequest req;
        req.user_text = concat_eval_prompt(spec, *prefix, candidates.variant(variant));
        req.role = Role::EVALUATOR;
        req.purpose = Purpose::EVALUATE;
        auto eval_start = Clock::now();
        ChatResponse resp = gateway.complete(req);
        result.eval_ms += ms_since(eval_start);

        TimedVote timed;
        timed.vote.instance_id = instance.id;
        timed.vote.run_index = run;
        timed.vote.variant_index = static_cast<int>(variant);
        timed.vote.raw_text = resp.text;
        timed.vote.normalized = normalize(resp.text, spec);
        timed.latency_ms = resp.latency_ms;
        result.votes.push_back(std::move(timed));
      }
    }

    std::vector<Vote> votes;
    votes.reserve(result.votes.size());
    for (const auto& timed : result.votes) votes.push_back(timed.vote);
    VoteTally verdict = tally(std::move(votes), config.n, config.r);
    result.winner = verdict.winner;
    result.tie_broken = verdict.tie_broken;
    result.abstentions = verdict.abstentions;
    result.correct = verdict.winner == instance.gold;
  } catch (const Error& e) {
    result.aborted = true;
    result.abort_reason = e.what();
  }
  return result;
}

}  // namespace

RunManifest run_dataset(const RunConfig& config, const std::vector<Instance>& dataset,
                        Gateway& gateway, const std::string& manifest_path) {
  config.validate();
  if (dataset.empty()) throw Error(ErrorCode::CONFIG_INVALID, "empty dataset");
  const TaskSpec spec = load_task(config.task_id);

  std::vector<Instance> work(dataset.begin(),
                             config.limit && *config.limit < static_cast<int>(dataset.size())
                                 ? dataset.begin() + *config.limit
                                 : dataset.end());

  const auto run_start = Clock::now();
  std::map<std::string, long> calls_before;
  long tokens_before_prompt = 0, tokens_before_completion = 0;
  for (Purpose p : {Purpose::GEN_EXAMPLES, Purpose::PARAPHRASE, Purpose::EVALUATE}) {
    CallStats s = gateway.stats(p);
    calls_before[purpose_name(p)] = s.calls;
    tokens_before_prompt += s.prompt_tokens;
    tokens_before_completion += s.completion_tokens;
  }

  ContextPrefix shared_prefix;
  const bool share = config.example_regen == RegenPolicy::ONCE;
  double shared_gen_ms = 0.0;
  if (share) {
    auto start = Clock::now();
    shared_prefix = forge_prefix(spec, config, "_dataset", 0, gateway);
    shared_gen_ms = ms_since(start);
  }

  RunManifest manifest;
  manifest.config = config;
  manifest.instances.resize(work.size());

  std::ofstream out;
  if (!manifest_path.empty()) {
    out.open(manifest_path);
    if (!out.good())
      throw Error(ErrorCode::CONFIG_INVALID, "cannot write manifest '" + manifest_path + "'");
    out << manifest_io::header_line(config) << "\n";
    out.flush();
  }

  std::mutex mu;
  std::condition_variable cv;
  std::vector<char> done(work.size(), 0);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= work.size()) return;
      InstanceResult result = process_instance(spec, config, work[i], gateway,
                                               share ? &shared_prefix : nullptr);
      std::lock_guard<std::mutex> lock(mu);
      manifest.instances[i] = std::move(result);
      done[i] = 1;
      cv.notify_all();
    }
  };

  const int thread_count =
      std::min<int>(config.concurrency, static_cast<int>(work.size()));
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(thread_count));
  for (int t = 0; t < thread_count; ++t) threads.emplace_back(worker);

  // Flush in instance order so a crash loses at most the in-flight instances
  // and two identical runs produce identical record ordering.
  for (std::size_t i = 0; i < work.size(); ++i) {
    std::unique_lock<std::mutex> lock(mu);
    cv.wait(lock, [&] { return done[i] != 0; });
    if (out.is_open()) {
      const InstanceResult& result = manifest.instances[i];
      for (const auto& vote : result.votes) out << manifest_io::vote_line(vote) << "\n";
      out << manifest_io::instance_line(result) << "\n";
      out.flush();
    }
  }
  for (auto& thread : threads) thread.join();

  RunSummary& summary = manifest.summary;
  summary.instances = static_cast<int>(work.size());
  for (const auto& result : manifest.instances) {
    summary.total_votes += static_cast<long>(result.votes.size());
    if (result.aborted) {
      ++summary.aborted;
      continue;
    }
    ++summary.scored;
    if (result.correct) ++summary.correct_count;
    if (result.tie_broken) ++summary.ties;
    summary.abstain_votes += result.abstentions;
    summary.wall_gen_ms += result.gen_ms;
    summary.wall_para_ms += result.para_ms;
    summary.wall_eval_ms += result.eval_ms;
  }
  summary.wall_gen_ms += shared_gen_ms;
  summary.accuracy =
      summary.scored > 0 ? static_cast<double>(summary.correct_count) / summary.scored : 0.0;
  summary.wall_total_ms = ms_since(run_start);
  for (Purpose p : {Purpose::GEN_EXAMPLES, Purpose::PARAPHRASE, Purpose::EVALUATE}) {
    CallStats s = gateway.stats(p);
    summary.calls[purpose_name(p)] = s.calls - calls_before[purpose_name(p)];
    summary.prompt_tokens += s.prompt_tokens;
    summary.completion_tokens += s.completion_tokens;
  }
  summary.prompt_tokens -= tokens_before_prompt;
  summary.completion_tokens -= tokens_before_completion;

  if (out.is_open()) {
    out << manifest_io::summary_line(summary) << "\n";
    out.flush();
    manifest.path = manifest_path;
  }
  return manifest;
}

}  // namespace promptvote

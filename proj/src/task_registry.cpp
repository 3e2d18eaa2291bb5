#include "promptvote/task_registry.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "promptvote/errors.hpp"

namespace promptvote {

using json = nlohmann::json;

// builtin_tasks.cpp
TaskSpec make_builtin_task(const std::string& task_id);

const char* answer_mode_name(AnswerMode mode) {
  switch (mode) {
    case AnswerMode::CLASS_LABEL: return "CLASS_LABEL";
    case AnswerMode::MC_LETTER: return "MC_LETTER";
    case AnswerMode::INTEGER: return "INTEGER";
    case AnswerMode::MATH_EXPR: return "MATH_EXPR";
  }
  return "CLASS_LABEL";
}

AnswerMode answer_mode_from_name(const std::string& name) {
  if (name == "CLASS_LABEL") return AnswerMode::CLASS_LABEL;
  if (name == "MC_LETTER") return AnswerMode::MC_LETTER;
  if (name == "INTEGER") return AnswerMode::INTEGER;
  if (name == "MATH_EXPR") return AnswerMode::MATH_EXPR;
  throw Error(ErrorCode::MALFORMED_SPEC, "unknown answer_mode '" + name + "'");
}

bool TaskSpec::has_label(const std::string& label) const {
  return std::find(labels.begin(), labels.end(), label) != labels.end();
}

const std::vector<std::string>& TaskSpec::pool_for(const std::string& label) const {
  auto it = topic_pools.find(labelled() ? label : std::string());
  if (it == topic_pools.end() || it->second.empty()) {
    throw Error(ErrorCode::EMPTY_TOPIC_POOL,
                "task '" + task_id + "' label '" + label + "'");
  }
  return it->second;
}

void TaskSpec::validate() const {
  auto fail = [this](const std::string& what) {
    throw Error(ErrorCode::MALFORMED_SPEC, "task '" + task_id + "': " + what);
  };
  if (task_id.empty()) fail("missing task_id");
  const bool needs_labels =
      answer_mode == AnswerMode::CLASS_LABEL || answer_mode == AnswerMode::MC_LETTER;
  if (needs_labels && labels.empty()) fail("labels required for this answer_mode");
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (l.empty()) fail("empty label");
    if (!seen.insert(l).second) fail("duplicate label '" + l + "'");
  }
  if (needs_labels) {
    for (const auto& l : labels) {
      auto it = topic_pools.find(l);
      if (it == topic_pools.end() || it->second.empty())
        fail("label '" + l + "' has no topic pool");
    }
  } else {
    auto it = topic_pools.find("");
    if (it == topic_pools.end() || it->second.empty()) fail("missing shared topic pool");
  }
  if (gen_template.find(count_token) == std::string::npos)
    fail("gen_template missing count placeholder " + count_token);
  if (labelled() && gen_template.find(label_token) == std::string::npos)
    fail("gen_template missing label placeholder " + label_token);
  if (gen_template.find("{plan}") == std::string::npos) fail("gen_template missing {plan}");
  if (para_template.find("{n}") == std::string::npos) fail("para_template missing {n}");
  if (para_template.find("{s}") == std::string::npos) fail("para_template missing {s}");
  if (body_field.empty() || label_field.empty()) fail("missing body/label field names");
}

TaskSpec load_task(const std::string& task_id) {
  const auto ids = builtin_task_ids();
  if (std::find(ids.begin(), ids.end(), task_id) != ids.end()) {
    TaskSpec spec = make_builtin_task(task_id);
    spec.validate();
    return spec;
  }
  std::ifstream probe(task_id);
  if (probe.good()) return load_task_file(task_id);
  throw Error(ErrorCode::UNKNOWN_TASK, "'" + task_id + "' is not a builtin task or a readable file");
}

TaskSpec load_task_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw Error(ErrorCode::UNKNOWN_TASK, "cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MALFORMED_SPEC, std::string("parse failure: ") + e.what());
  }
  TaskSpec t;
  try {
    t.task_id = j.at("task_id").get<std::string>();
    t.answer_mode = answer_mode_from_name(j.at("answer_mode").get<std::string>());
    if (j.contains("labels")) t.labels = j["labels"].get<std::vector<std::string>>();
    if (j.contains("topic_pools"))
      t.topic_pools = j["topic_pools"].get<std::map<std::string, std::vector<std::string>>>();
    if (j.contains("style_rules"))
      t.style_rules = j["style_rules"].get<std::map<std::string, std::string>>();
    t.gen_system = j.value("gen_system", "");
    t.gen_template = j.at("gen_template").get<std::string>();
    t.count_token = j.value("count_token", "{num_examples}");
    t.label_token = j.value("label_token", "{label}");
    t.plan_line =
        j.value("plan_line", "- Example{i}: write exactly {count} sentence(s); topic: {topic}.");
    t.para_system = j.value("para_system", "");
    t.para_template = j.at("para_template").get<std::string>();
    t.body_field = j.value("body_field", "Sentence");
    t.label_field = j.value("label_field", "Label");
    t.eval_instruction = j.at("eval_instruction").get<std::string>();
    t.eval_suffix = j.value("eval_suffix", "");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MALFORMED_SPEC, std::string("missing/bad field: ") + e.what());
  }
  t.validate();
  return t;
}

DiversityPlan build_plan(const TaskSpec& spec, const std::string& label, int count,
                         std::uint64_t seed) {
  if (count < 1) throw Error(ErrorCode::CONFIG_INVALID, "plan count must be >= 1");
  const auto& pool = spec.pool_for(label);
  std::mt19937_64 rng(seed);
  const std::size_t topic_offset = rng() % pool.size();
  const int count_start = static_cast<int>(rng() % 3);
  DiversityPlan plan;
  plan.slots.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    PlanSlot slot;
    slot.topic = pool[(topic_offset + static_cast<std::size_t>(i)) % pool.size()];
    // Cycling over {1,2,3} guarantees both a 1 and a 3 for plans of length >= 3.
    slot.sentence_count = 1 + (count_start + i) % 3;
    plan.slots.push_back(std::move(slot));
  }
  return plan;
}

namespace {

void replace_all(std::string& text, const std::string& from, const std::string& to) {
  if (from.empty()) return;
  std::size_t pos = 0;
  while ((pos = text.find(from, pos)) != std::string::npos) {
    text.replace(pos, from.size(), to);
    pos += to.size();
  }
}

// Placeholder tokens that must never survive rendering.
const char* kKnownTokens[] = {
    "{num_examples}", "{example_count}", "{k}",     "{label}", "{target_label}",
    "{plan}",         "{n}",             "{s}",     "{counts[", "{topics[",
    "{sentence_counts[", "{topic_list["};

void check_resolved(const std::string& text, const std::string& context) {
  for (const char* token : kKnownTokens) {
    if (text.find(token) != std::string::npos) {
      throw Error(ErrorCode::PLACEHOLDER_UNRESOLVED,
                  context + " still contains " + token);
    }
  }
}

std::string render_plan_block(const TaskSpec& spec, const DiversityPlan& plan) {
  std::string block;
  for (std::size_t i = 0; i < plan.slots.size(); ++i) {
    std::string line = spec.plan_line;
    replace_all(line, "{i}", std::to_string(i + 1));
    replace_all(line, "{count}", std::to_string(plan.slots[i].sentence_count));
    replace_all(line, "{topic}", plan.slots[i].topic);
    if (i) block += '\n';
    block += line;
  }
  return block;
}

}  // namespace

std::string render_gen_prompt(const TaskSpec& spec, const std::string& label,
                              const DiversityPlan& plan) {
  if (plan.empty()) throw Error(ErrorCode::CONFIG_INVALID, "empty diversity plan");
  if (spec.labelled() && !spec.has_label(label))
    throw Error(ErrorCode::CONFIG_INVALID, "unknown label '" + label + "'");
  std::string text = spec.gen_template;
  replace_all(text, "{plan}", render_plan_block(spec, plan));
  // Indexed forms, for user templates that spell out plan slots explicitly.
  for (std::size_t i = 0; i < plan.slots.size(); ++i) {
    const std::string idx = std::to_string(i);
    const std::string count = std::to_string(plan.slots[i].sentence_count);
    replace_all(text, "{counts[" + idx + "]}", count);
    replace_all(text, "{sentence_counts[" + idx + "]}", count);
    replace_all(text, "{topics[" + idx + "]}", plan.slots[i].topic);
    replace_all(text, "{topic_list[" + idx + "]}", plan.slots[i].topic);
  }
  replace_all(text, spec.count_token, std::to_string(plan.size()));
  if (spec.labelled()) replace_all(text, spec.label_token, label);
  check_resolved(text, "gen prompt for '" + spec.task_id + "'");
  return text;
}

std::string render_para_prompt(const TaskSpec& spec, const std::string& x, int n) {
  if (n < 1) throw Error(ErrorCode::CONFIG_INVALID, "paraphrase count must be >= 1");
  if (x.empty()) throw Error(ErrorCode::CONFIG_INVALID, "empty input");
  std::string text = spec.para_template;
  replace_all(text, "{n}", std::to_string(n));
  // Check before splicing in x, which is free to contain brace sequences.
  for (const char* token : kKnownTokens) {
    if (std::string_view(token) == "{s}") continue;
    if (text.find(token) != std::string::npos) {
      throw Error(ErrorCode::PLACEHOLDER_UNRESOLVED,
                  "paraphrase prompt for '" + spec.task_id + "' still contains " + token);
    }
  }
  replace_all(text, "{s}", x);
  return text;
}

}  // namespace promptvote

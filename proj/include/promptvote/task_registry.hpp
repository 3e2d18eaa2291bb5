#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace promptvote {

enum class AnswerMode { CLASS_LABEL, MC_LETTER, INTEGER, MATH_EXPR };

const char* answer_mode_name(AnswerMode mode);
AnswerMode answer_mode_from_name(const std::string& name);

struct PlanSlot {
  std::string topic;
  int sentence_count = 1;  // 1..3
};

/// Per-label diversity schedule for one generation request: which topic and
/// how many sentences each synthesized example should use.
struct DiversityPlan {
  std::vector<PlanSlot> slots;

  bool empty() const { return slots.empty(); }
  std::size_t size() const { return slots.size(); }
};

/// Declarative description of one benchmark task: label set, topic pools,
/// style rules and the verbatim prompt templates.
struct TaskSpec {
  std::string task_id;
  std::vector<std::string> labels;  // empty for open-answer math tasks
  AnswerMode answer_mode = AnswerMode::CLASS_LABEL;

  // Topic pools keyed by label; label-free tasks use the "" key as a shared pool.
  std::map<std::string, std::vector<std::string>> topic_pools;
  std::map<std::string, std::string> style_rules;

  std::string gen_system;    // system prompt for generation requests ("" if none)
  std::string gen_template;  // user-message template, {plan} marks the diversity block
  std::string count_token;   // "{num_examples}", "{example_count}" or "{k}"
  std::string label_token;   // "{label}" or "{target_label}"
  std::string plan_line;     // per-slot line, placeholders {i} {count} {topic}

  std::string para_system;
  std::string para_template;  // placeholders {n} and {s}

  std::string body_field;   // "Sentence" or "Question"
  std::string label_field;  // "Label" or "Answer"

  std::string eval_instruction;
  std::string eval_suffix;

  bool labelled() const { return !labels.empty(); }
  bool math_mode() const {
    return answer_mode == AnswerMode::INTEGER || answer_mode == AnswerMode::MATH_EXPR;
  }
  bool has_label(const std::string& label) const;
  const std::vector<std::string>& pool_for(const std::string& label) const;

  /// Throws MALFORMED_SPEC when an invariant is violated.
  void validate() const;
};

std::vector<std::string> builtin_task_ids();

/// Resolves a builtin task id, or a path to a user task-spec file (JSON with
/// the same field names as TaskSpec).
TaskSpec load_task(const std::string& task_id);
TaskSpec load_task_file(const std::string& path);

/// Deterministic topic/sentence-count schedule: topics round-robin from the
/// label's pool starting at a seed-derived offset; sentence counts cycle over
/// {1,2,3} from a seed-derived start so any plan of length >= 3 contains both
/// a 1 and a 3.
DiversityPlan build_plan(const TaskSpec& spec, const std::string& label, int count,
                         std::uint64_t seed);

std::string render_gen_prompt(const TaskSpec& spec, const std::string& label,
                              const DiversityPlan& plan);
std::string render_para_prompt(const TaskSpec& spec, const std::string& x, int n);

}  // namespace promptvote

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "promptvote/gateway.hpp"
#include "promptvote/task_registry.hpp"

namespace promptvote {

enum class RejectReason {
  LABEL_MISMATCH,
  FORBIDDEN_QUOTE,
  NON_ASCII,
  MISSING_LABEL,
  DUPLICATE_INDEX,
  EMPTY_BODY,
  FENCED_OUTPUT,
};

const char* reject_reason_name(RejectReason reason);

/// One validated synthetic in-context demonstration.
struct Example {
  std::string body;   // text between the block's first and last double quote
  std::string label;  // label string, or answer string for open-answer tasks
  std::string topic;
  int declared_index = 0;
  int source_run = 0;
};

struct Reject {
  std::string fragment;
  RejectReason reason;
};

struct ParseResult {
  std::vector<Example> valid;
  std::vector<Reject> rejects;
};

/// The instruction plus shuffled formatted examples prepended to every
/// candidate input.
struct ContextPrefix {
  std::string instruction;
  std::vector<Example> examples;
  std::string rendered;
};

/// Per-label example counts: floor(k/|labels|) each, remainder to the
/// earliest labels in task order. Sums to k, max-min <= 1.
std::vector<int> allocate_counts(int k, int num_labels);

/// Canonical block format for one example; format then parse is lossless.
std::string format_example(const TaskSpec& spec, const Example& example, int index);

ParseResult parse_examples(const std::string& text, const TaskSpec& spec);

/// One generation request per label (a single request for label-free tasks).
/// Returns everything that parsed, before balance enforcement.
ParseResult gen_examples(const TaskSpec& spec, int k, Gateway& gateway, std::uint64_t seed);

/// Drops rejects, re-requests per-label shortfalls up to max_topup_rounds and
/// returns exactly k balanced examples, or throws TOPUP_EXHAUSTED.
std::vector<Example> validate_and_topup(ParseResult candidates, const TaskSpec& spec, int k,
                                        Gateway& gateway, std::uint64_t seed,
                                        int max_topup_rounds = 3);

/// Seed-deterministic uniform shuffle + rendering of the full prefix.
ContextPrefix assemble_prefix(const TaskSpec& spec, std::vector<Example> examples,
                              std::uint64_t seed);

/// Final evaluator prompt: prefix plus the candidate input and the
/// answer-elicitation trailer.
std::string concat_eval_prompt(const TaskSpec& spec, const ContextPrefix& prefix,
                               const std::string& candidate);

}  // namespace promptvote

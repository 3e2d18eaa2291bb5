#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "promptvote/task_registry.hpp"

namespace promptvote {

/// Sentinel for a raw output that could not be normalized to any admissible
/// answer. Abstentions are excluded from the tally.
inline const std::string kAbstain = "\x01"
                                    "ABSTAIN";

/// One prediction, indexed by (variant i, run j). Variant 0 is the original
/// input.
struct Vote {
  std::string instance_id;
  int run_index = 1;     // 1..r
  int variant_index = 0; // 0..n
  std::string raw_text;
  std::string normalized;  // answer string or kAbstain

  bool abstained() const { return normalized == kAbstain; }
};

struct VoteTally {
  std::map<std::string, int> counts;  // non-abstain answers only
  int total = 0;                      // (n+1)*r
  std::string winner;
  bool tie_broken = false;
  int abstentions = 0;
};

/// Maps raw evaluator output to a canonical answer, or kAbstain.
std::string normalize(const std::string& raw, const TaskSpec& spec);

/// Deterministic tie resolution among the maximal-count answers:
/// 1) majority among variant-0 votes restricted to the tied set;
/// 2) the variant-0 vote with the lowest run index landing in the tied set;
/// 3) lexicographically smallest tied answer.
std::string break_tie(const std::set<std::string>& tied, const std::vector<Vote>& votes);

/// Unweighted majority over all (n+1)*r votes. Pure function; votes may
/// arrive in any order. Throws ALL_ABSTAIN when no vote normalized.
VoteTally tally(std::vector<Vote> votes, int n, int r);

}  // namespace promptvote

#pragma once

#include <string>
#include <vector>

#include "promptvote/gateway.hpp"
#include "promptvote/task_registry.hpp"

namespace promptvote {

/// The original input plus its n paraphrases. Iteration order is fixed:
/// variant 0 is the original, paraphrases follow in model output order.
struct CandidateSet {
  std::string original;
  std::vector<std::string> paraphrases;
  std::string instance_id;

  std::size_t size() const { return paraphrases.size() + 1; }
  const std::string& variant(std::size_t index) const {
    return index == 0 ? original : paraphrases[index - 1];
  }
};

/// What to do when the model keeps undersupplying paraphrases.
enum class ShortfallPolicy {
  ABORT,              // raise PARAPHRASE_SHORTFALL (default)
  PAD_WITH_ORIGINAL,  // fill missing variants with the original input
};

/// Splits line-separated paraphrase output: trims, drops blanks, strips
/// leading enumeration markers, keeps at most n lines in order.
std::vector<std::string> parse_paraphrase_lines(const std::string& text, int n);

/// n = 0 returns {x} with no gateway call. Undersupply gets one retry with the
/// same prompt before the shortfall policy applies.
CandidateSet paraphrase(const TaskSpec& spec, const std::string& x, int n, Gateway& gateway,
                        ShortfallPolicy policy = ShortfallPolicy::ABORT);

}  // namespace promptvote

#include "promptvote/vote.hpp"

#include <algorithm>
#include <cctype>

#include "promptvote/errors.hpp"

namespace promptvote {

namespace {

std::string fold_case(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string trim_punct(const std::string& s) {
  auto is_junk = [](unsigned char c) {
    return std::isspace(c) || std::ispunct(c);
  };
  std::size_t begin = 0, end = s.size();
  while (begin < end && is_junk(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && is_junk(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

std::string normalize_class_label(const std::string& raw, const TaskSpec& spec) {
  const std::string folded = fold_case(trim_punct(raw));
  for (const auto& label : spec.labels)
    if (fold_case(label) == folded) return label;
  // Unique-substring fallback over the full raw text.
  const std::string haystack = fold_case(raw);
  std::string found;
  for (const auto& label : spec.labels) {
    if (haystack.find(fold_case(label)) != std::string::npos) {
      if (!found.empty()) return kAbstain;  // ambiguous
      found = label;
    }
  }
  return found.empty() ? kAbstain : found;
}

std::string normalize_mc_letter(const std::string& raw, const TaskSpec& spec) {
  auto letter_at = [&](std::size_t i) -> std::string {
    char c = raw[i];
    char upper = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (upper < 'A' || upper > 'E') return {};
    const bool left_ok = i == 0 || !is_word_char(raw[i - 1]);
    const bool right_ok = i + 1 >= raw.size() || !is_word_char(raw[i + 1]);
    if (!left_ok || !right_ok) return {};
    std::string letter(1, upper);
    return spec.has_label(letter) ? letter : std::string();
  };

  // Prefer the letter right after an explicit "Answer:" marker.
  auto pos = raw.rfind("Answer:");
  if (pos != std::string::npos) {
    for (std::size_t i = pos + 7; i < raw.size(); ++i) {
      if (std::isspace(static_cast<unsigned char>(raw[i])) || raw[i] == '(' ||
          raw[i] == '*')
        continue;
      auto letter = letter_at(i);
      if (!letter.empty()) return letter;
      break;
    }
  }
  // First standalone uppercase A-E.
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] >= 'A' && raw[i] <= 'E') {
      auto letter = letter_at(i);
      if (!letter.empty()) return letter;
    }
  }
  // Lowercase fallback.
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] >= 'a' && raw[i] <= 'e') {
      auto letter = letter_at(i);
      if (!letter.empty()) return letter;
    }
  }
  return kAbstain;
}

std::string boxed_content(const std::string& raw) {
  auto pos = raw.rfind("\\boxed{");
  if (pos == std::string::npos) return {};
  std::size_t i = pos + 7;
  int depth = 1;
  std::string content;
  for (; i < raw.size(); ++i) {
    if (raw[i] == '{') ++depth;
    if (raw[i] == '}' && --depth == 0) return content;
    content += raw[i];
  }
  return {};
}

std::string canonical_integer(const std::string& digits_with_sign) {
  bool negative = digits_with_sign[0] == '-';
  std::size_t i = (digits_with_sign[0] == '-' || digits_with_sign[0] == '+') ? 1 : 0;
  while (i + 1 < digits_with_sign.size() && digits_with_sign[i] == '0') ++i;
  std::string digits = digits_with_sign.substr(i);
  return (negative && digits != "0") ? "-" + digits : digits;
}

// Last integer token; commas between digits are thousands separators.
std::string last_integer(const std::string& text) {
  std::string best;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isdigit(static_cast<unsigned char>(text[i]))) {
      std::size_t start = i;
      bool negative = start > 0 && text[start - 1] == '-' &&
                      (start < 2 || !is_word_char(text[start - 2]));
      std::string digits;
      while (i < text.size() &&
             (std::isdigit(static_cast<unsigned char>(text[i])) ||
              (text[i] == ',' && i + 1 < text.size() &&
               std::isdigit(static_cast<unsigned char>(text[i + 1]))))) {
        if (text[i] != ',') digits += text[i];
        ++i;
      }
      best = (negative ? "-" : "") + digits;
    } else {
      ++i;
    }
  }
  return best;
}

std::string normalize_integer(const std::string& raw) {
  std::string source = boxed_content(raw);
  std::string value = last_integer(source.empty() ? raw : source);
  if (value.empty()) return kAbstain;
  return canonical_integer(value);
}

std::string collapse_whitespace(const std::string& s) {
  std::string out;
  bool pending_space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out += ' ';
      pending_space = false;
      out += c;
    }
  }
  return out;
}

std::string normalize_math_expr(const std::string& raw) {
  std::string value = boxed_content(raw);
  if (value.empty() && raw.rfind("\\boxed{") != std::string::npos)
    return kAbstain;  // an explicitly boxed empty answer is no answer
  if (value.empty()) {
    // Last non-empty line.
    std::size_t end = raw.find_last_not_of(" \t\r\n");
    if (end == std::string::npos) return kAbstain;
    std::size_t start = raw.rfind('\n', end);
    value = raw.substr(start == std::string::npos ? 0 : start + 1,
                       end - (start == std::string::npos ? 0 : start + 1) + 1);
  }
  value = collapse_whitespace(value);
  while (value.size() >= 2 && value.front() == '{' && value.back() == '}')
    value = collapse_whitespace(value.substr(1, value.size() - 2));
  return value.empty() ? kAbstain : value;
}

}  // namespace

std::string normalize(const std::string& raw, const TaskSpec& spec) {
  switch (spec.answer_mode) {
    case AnswerMode::CLASS_LABEL: return normalize_class_label(raw, spec);
    case AnswerMode::MC_LETTER: return normalize_mc_letter(raw, spec);
    case AnswerMode::INTEGER: return normalize_integer(raw);
    case AnswerMode::MATH_EXPR: return normalize_math_expr(raw);
  }
  return kAbstain;
}

std::string break_tie(const std::set<std::string>& tied, const std::vector<Vote>& votes) {
  if (tied.empty()) throw Error(ErrorCode::CONFIG_INVALID, "empty tie set");

  std::vector<const Vote*> originals;
  for (const auto& vote : votes)
    if (vote.variant_index == 0 && !vote.abstained()) originals.push_back(&vote);
  std::sort(originals.begin(), originals.end(),
            [](const Vote* a, const Vote* b) { return a->run_index < b->run_index; });

  // Level 1: majority among original-input votes, restricted to the tied set.
  std::map<std::string, int> counts;
  for (const Vote* vote : originals)
    if (tied.count(vote->normalized)) ++counts[vote->normalized];
  std::set<std::string> still_tied = tied;
  if (!counts.empty()) {
    int best = 0;
    for (const auto& [_, c] : counts) best = std::max(best, c);
    still_tied.clear();
    for (const auto& [answer, c] : counts)
      if (c == best) still_tied.insert(answer);
    if (still_tied.size() == 1) return *still_tied.begin();
    // Level 2: earliest-run original vote landing in the remaining tie.
    for (const Vote* vote : originals)
      if (still_tied.count(vote->normalized)) return vote->normalized;
  }
  // Level 3: no original vote can decide; deterministic lexicographic fallback.
  return *still_tied.begin();
}

VoteTally tally(std::vector<Vote> votes, int n, int r) {
  const std::size_t expected = static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(r);
  if (votes.size() != expected)
    throw Error(ErrorCode::CONFIG_INVALID,
                "expected " + std::to_string(expected) + " votes, got " +
                    std::to_string(votes.size()));
  // Arrival order must not matter.
  std::sort(votes.begin(), votes.end(), [](const Vote& a, const Vote& b) {
    if (a.run_index != b.run_index) return a.run_index < b.run_index;
    return a.variant_index < b.variant_index;
  });

  VoteTally result;
  result.total = static_cast<int>(expected);
  for (const auto& vote : votes) {
    if (vote.abstained())
      ++result.abstentions;
    else
      ++result.counts[vote.normalized];
  }
  if (result.counts.empty())
    throw Error(ErrorCode::ALL_ABSTAIN, "no vote normalized to an admissible answer");

  int best = 0;
  for (const auto& [_, count] : result.counts) best = std::max(best, count);
  std::set<std::string> tied;
  for (const auto& [answer, count] : result.counts)
    if (count == best) tied.insert(answer);

  if (tied.size() == 1) {
    result.winner = *tied.begin();
  } else {
    result.winner = break_tie(tied, votes);
    result.tie_broken = true;
  }
  return result;
}

}  // namespace promptvote

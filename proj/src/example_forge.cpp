#include "promptvote/example_forge.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "promptvote/digest.hpp"
#include "promptvote/errors.hpp"

namespace promptvote {

const char* reject_reason_name(RejectReason reason) {
  switch (reason) {
    case RejectReason::LABEL_MISMATCH: return "LABEL_MISMATCH";
    case RejectReason::FORBIDDEN_QUOTE: return "FORBIDDEN_QUOTE";
    case RejectReason::NON_ASCII: return "NON_ASCII";
    case RejectReason::MISSING_LABEL: return "MISSING_LABEL";
    case RejectReason::DUPLICATE_INDEX: return "DUPLICATE_INDEX";
    case RejectReason::EMPTY_BODY: return "EMPTY_BODY";
    case RejectReason::FENCED_OUTPUT: return "FENCED_OUTPUT";
  }
  return "UNKNOWN";
}

std::vector<int> allocate_counts(int k, int num_labels) {
  if (k < 1 || num_labels < 1)
    throw Error(ErrorCode::CONFIG_INVALID, "allocate_counts needs k >= 1, labels >= 1");
  std::vector<int> counts(static_cast<std::size_t>(num_labels), k / num_labels);
  for (int i = 0; i < k % num_labels; ++i) ++counts[static_cast<std::size_t>(i)];
  return counts;
}

std::string format_example(const TaskSpec& spec, const Example& example, int index) {
  std::string out = "Example" + std::to_string(index) + ":\n";
  out += spec.body_field + ": \"" + example.body + "\"\n";
  out += spec.label_field + ": " + example.label + "\n";
  return out;
}

namespace {

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::string fold_case(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool parse_block_index(const std::string& line, int& index) {
  if (line.rfind("Example", 0) != 0) return false;
  std::size_t pos = 7;
  int value = 0;
  bool any = false;
  while (pos < line.size() && std::isdigit(static_cast<unsigned char>(line[pos]))) {
    value = value * 10 + (line[pos] - '0');
    any = true;
    ++pos;
  }
  if (!any || pos >= line.size() || line[pos] != ':') return false;
  index = value;
  return true;
}

// ASCII-only, with bytes inside $...$ spans exempt for math tasks (TeX).
bool body_is_ascii(const std::string& body, bool tex_allowed) {
  bool in_tex = false;
  for (unsigned char c : body) {
    if (tex_allowed && c == '$') {
      in_tex = !in_tex;
      continue;
    }
    if (c >= 0x80 && !(tex_allowed && in_tex)) return false;
  }
  return true;
}

bool is_integer_literal(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

std::string canonical_integer(const std::string& s) {
  bool negative = s[0] == '-';
  std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  while (i + 1 < s.size() && s[i] == '0') ++i;
  std::string digits = s.substr(i);
  return (negative && digits != "0") ? "-" + digits : digits;
}

struct Block {
  int declared_index = 0;
  std::string text;
};

std::vector<Block> split_blocks(const std::string& text) {
  std::vector<Block> blocks;
  std::istringstream lines(text);
  std::string line;
  Block* current = nullptr;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    int index = 0;
    if (parse_block_index(line, index)) {
      blocks.push_back({index, line + "\n"});
      current = &blocks.back();
    } else if (current) {
      current->text += line + "\n";
    }
  }
  return blocks;
}

}  // namespace

ParseResult parse_examples(const std::string& text, const TaskSpec& spec) {
  ParseResult result;
  if (text.find("```") != std::string::npos) {
    result.rejects.push_back({text, RejectReason::FENCED_OUTPUT});
    return result;
  }

  std::set<int> seen_indices;
  for (const Block& block : split_blocks(text)) {
    auto reject = [&](RejectReason reason) {
      result.rejects.push_back({block.text, reason});
    };
    if (!seen_indices.insert(block.declared_index).second) {
      reject(RejectReason::DUPLICATE_INDEX);
      continue;
    }

    const auto first_quote = block.text.find('"');
    const auto last_quote = block.text.rfind('"');
    if (first_quote == std::string::npos || last_quote == first_quote) {
      reject(RejectReason::EMPTY_BODY);
      continue;
    }
    const std::string body =
        block.text.substr(first_quote + 1, last_quote - first_quote - 1);
    if (body.find('"') != std::string::npos) {
      reject(RejectReason::FORBIDDEN_QUOTE);
      continue;
    }
    if (trim(body).empty()) {
      reject(RejectReason::EMPTY_BODY);
      continue;
    }
    if (!body_is_ascii(body, spec.math_mode())) {
      reject(RejectReason::NON_ASCII);
      continue;
    }

    // Answer line lives after the closing quote.
    const std::string tail = block.text.substr(last_quote + 1);
    const std::string marker = spec.label_field + ":";
    auto lpos = tail.find(marker);
    if (lpos == std::string::npos) {
      reject(RejectReason::MISSING_LABEL);
      continue;
    }
    auto lend = tail.find('\n', lpos);
    std::string raw_label = trim(tail.substr(
        lpos + marker.size(), lend == std::string::npos ? std::string::npos
                                                        : lend - lpos - marker.size()));
    if (raw_label.size() >= 2 && raw_label.front() == '"' && raw_label.back() == '"')
      raw_label = trim(raw_label.substr(1, raw_label.size() - 2));
    if (raw_label.empty()) {
      reject(RejectReason::MISSING_LABEL);
      continue;
    }

    std::string label;
    switch (spec.answer_mode) {
      case AnswerMode::CLASS_LABEL:
      case AnswerMode::MC_LETTER: {
        const std::string folded = fold_case(raw_label);
        for (const auto& candidate : spec.labels) {
          if (fold_case(candidate) == folded) {
            label = candidate;
            break;
          }
        }
        if (label.empty()) {
          reject(RejectReason::LABEL_MISMATCH);
          continue;
        }
        break;
      }
      case AnswerMode::INTEGER: {
        std::string digits = raw_label;
        digits.erase(std::remove(digits.begin(), digits.end(), ','), digits.end());
        if (!is_integer_literal(digits)) {
          reject(RejectReason::LABEL_MISMATCH);
          continue;
        }
        label = canonical_integer(digits);
        break;
      }
      case AnswerMode::MATH_EXPR:
        label = raw_label;
        break;
    }

    Example example;
    example.body = body;
    example.label = label;
    example.declared_index = block.declared_index;
    result.valid.push_back(std::move(example));
  }
  return result;
}

namespace {

ParseResult request_and_parse(const TaskSpec& spec, const std::string& label, int count,
                              Gateway& gateway, std::uint64_t plan_seed) {
  DiversityPlan plan = build_plan(spec, label, count, plan_seed);
  ChatRequest req;
  req.system_text = spec.gen_system;
  req.user_text = render_gen_prompt(spec, label, plan);
  req.role = Role::GENERATOR;
  req.purpose = Purpose::GEN_EXAMPLES;
  ChatResponse resp = gateway.complete(req);
  ParseResult parsed = parse_examples(resp.text, spec);
  if (parsed.valid.empty() && parsed.rejects.empty())
    throw Error(ErrorCode::PARSE_EMPTY,
                "no example blocks in generator output for '" + spec.task_id + "'");
  for (std::size_t i = 0; i < parsed.valid.size(); ++i)
    parsed.valid[i].topic = plan.slots[i % plan.slots.size()].topic;
  return parsed;
}

}  // namespace

ParseResult gen_examples(const TaskSpec& spec, int k, Gateway& gateway, std::uint64_t seed) {
  if (k < 1) throw Error(ErrorCode::CONFIG_INVALID, "k must be >= 1");
  ParseResult all;
  if (!spec.labelled()) {
    return request_and_parse(spec, "", k, gateway, derive_seed(seed, "_shared", 0, "gen"));
  }
  const auto counts = allocate_counts(k, static_cast<int>(spec.labels.size()));
  for (std::size_t li = 0; li < spec.labels.size(); ++li) {
    ParseResult one = request_and_parse(spec, spec.labels[li], counts[li], gateway,
                                        derive_seed(seed, spec.labels[li], 0, "gen"));
    std::move(one.valid.begin(), one.valid.end(), std::back_inserter(all.valid));
    std::move(one.rejects.begin(), one.rejects.end(), std::back_inserter(all.rejects));
  }
  return all;
}

std::vector<Example> validate_and_topup(ParseResult candidates, const TaskSpec& spec, int k,
                                        Gateway& gateway, std::uint64_t seed,
                                        int max_topup_rounds) {
  std::vector<std::string> buckets_order =
      spec.labelled() ? spec.labels : std::vector<std::string>{""};
  std::vector<int> targets = spec.labelled()
                                 ? allocate_counts(k, static_cast<int>(spec.labels.size()))
                                 : std::vector<int>{k};

  std::map<std::string, std::vector<Example>> buckets;
  for (auto& example : candidates.valid) {
    const std::string key = spec.labelled() ? example.label : std::string("");
    buckets[key].push_back(std::move(example));
  }

  for (int round = 1; round <= max_topup_rounds; ++round) {
    bool any_shortfall = false;
    for (std::size_t li = 0; li < buckets_order.size(); ++li) {
      const std::string& label = buckets_order[li];
      const int shortfall = targets[li] - static_cast<int>(buckets[label].size());
      if (shortfall <= 0) continue;
      any_shortfall = true;
      ParseResult topup =
          request_and_parse(spec, label, shortfall, gateway,
                            derive_seed(seed, label.empty() ? "_shared" : label, round, "topup"));
      for (auto& example : topup.valid) {
        if (spec.labelled() && example.label != label) continue;
        if (static_cast<int>(buckets[label].size()) >= targets[li]) break;
        buckets[label].push_back(std::move(example));
      }
    }
    if (!any_shortfall) break;
  }

  std::vector<Example> out;
  out.reserve(static_cast<std::size_t>(k));
  for (std::size_t li = 0; li < buckets_order.size(); ++li) {
    auto& bucket = buckets[buckets_order[li]];
    if (static_cast<int>(bucket.size()) < targets[li])
      throw Error(ErrorCode::TOPUP_EXHAUSTED,
                  "label '" + buckets_order[li] + "' stuck at " +
                      std::to_string(bucket.size()) + "/" + std::to_string(targets[li]) +
                      " after " + std::to_string(max_topup_rounds) + " top-up rounds");
    // Over-delivery is trimmed to keep the balance invariant.
    for (int i = 0; i < targets[li]; ++i) out.push_back(std::move(bucket[static_cast<std::size_t>(i)]));
  }
  return out;
}

ContextPrefix assemble_prefix(const TaskSpec& spec, std::vector<Example> examples,
                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  // Fisher-Yates; std::shuffle is not pinned across standard libraries.
  for (std::size_t i = examples.size(); i > 1; --i) {
    std::size_t j = rng() % i;
    std::swap(examples[i - 1], examples[j]);
  }

  ContextPrefix prefix;
  prefix.instruction = spec.eval_instruction;
  prefix.rendered = spec.eval_instruction + "\n\n";
  for (std::size_t i = 0; i < examples.size(); ++i) {
    prefix.rendered += format_example(spec, examples[i], static_cast<int>(i + 1));
    prefix.rendered += "\n";
  }
  prefix.rendered += spec.eval_suffix;
  prefix.examples = std::move(examples);
  return prefix;
}

std::string concat_eval_prompt(const TaskSpec& spec, const ContextPrefix& prefix,
                               const std::string& candidate) {
  return prefix.rendered + "\n\n" + spec.body_field + ": \"" + candidate + "\"\n" +
         spec.label_field + ":";
}

}  // namespace promptvote

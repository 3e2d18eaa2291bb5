#include "promptvote/paraphrase.hpp"

#include <cctype>
#include <sstream>

#include "promptvote/errors.hpp"

namespace promptvote {

namespace {

std::string strip_enumeration_marker(const std::string& line) {
  std::size_t i = 0;
  // "1." / "12)" style
  std::size_t digits = 0;
  while (i + digits < line.size() &&
         std::isdigit(static_cast<unsigned char>(line[i + digits])))
    ++digits;
  if (digits > 0 && i + digits < line.size() &&
      (line[i + digits] == '.' || line[i + digits] == ')')) {
    i += digits + 1;
  } else if (line.rfind("- ", 0) == 0 || line.rfind("* ", 0) == 0) {
    i = 1;
  } else if (line.rfind("\xe2\x80\xa2", 0) == 0) {  // bullet
    i = 3;
  }
  while (i < line.size() && line[i] == ' ') ++i;
  return line.substr(i);
}

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

std::vector<std::string> parse_paraphrase_lines(const std::string& text, int n) {
  std::vector<std::string> out;
  std::istringstream lines(text);
  std::string line;
  while (static_cast<int>(out.size()) < n && std::getline(lines, line)) {
    std::string cleaned = strip_enumeration_marker(trim(line));
    if (!cleaned.empty()) out.push_back(std::move(cleaned));
  }
  return out;
}

CandidateSet paraphrase(const TaskSpec& spec, const std::string& x, int n, Gateway& gateway,
                        ShortfallPolicy policy) {
  if (x.empty()) throw Error(ErrorCode::CONFIG_INVALID, "empty input");
  if (n < 0) throw Error(ErrorCode::CONFIG_INVALID, "n must be >= 0");

  CandidateSet set;
  set.original = x;
  if (n == 0) return set;

  ChatRequest req;
  req.system_text = spec.para_system;
  req.user_text = render_para_prompt(spec, x, n);
  req.role = Role::GENERATOR;
  req.purpose = Purpose::PARAPHRASE;

  std::vector<std::string> lines;
  for (int attempt = 0; attempt < 2; ++attempt) {
    ChatResponse resp = gateway.complete(req);
    lines = parse_paraphrase_lines(resp.text, n);
    if (static_cast<int>(lines.size()) >= n) break;
  }
  if (static_cast<int>(lines.size()) < n) {
    if (policy == ShortfallPolicy::ABORT)
      throw Error(ErrorCode::PARAPHRASE_SHORTFALL,
                  "got " + std::to_string(lines.size()) + " of " + std::to_string(n) +
                      " paraphrases");
    while (static_cast<int>(lines.size()) < n) lines.push_back(x);
  }
  set.paraphrases = std::move(lines);
  return set;
}

}  // namespace promptvote

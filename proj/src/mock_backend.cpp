#include "promptvote/mock_backend.hpp"

#include <fstream>
#include <random>
#include <regex>
#include <sstream>

#include "json.hpp"
#include "promptvote/digest.hpp"
#include "promptvote/errors.hpp"

namespace promptvote {

using json = nlohmann::json;

namespace {

MockPurposeConfig::Mode mode_from_name(const std::string& name) {
  if (name == "synthetic") return MockPurposeConfig::Mode::SYNTHETIC;
  if (name == "fixed") return MockPurposeConfig::Mode::FIXED;
  if (name == "weights") return MockPurposeConfig::Mode::WEIGHTS;
  if (name == "echo") return MockPurposeConfig::Mode::ECHO;
  throw Error(ErrorCode::CONFIG_INVALID, "unknown mock mode '" + name + "'");
}

MockPurposeConfig parse_purpose(const json& j) {
  MockPurposeConfig cfg;
  cfg.mode = mode_from_name(j.value("mode", "synthetic"));
  if (j.contains("responses")) cfg.responses = j["responses"].get<std::vector<std::string>>();
  cfg.error_rate = j.value("error_rate", 0.0);
  cfg.echo_prob = j.value("echo_prob", 1.0);
  if (j.contains("labels")) cfg.labels = j["labels"].get<std::vector<std::string>>();
  if (j.contains("weights")) {
    for (const auto& [label, w] : j["weights"].items())
      cfg.weights.emplace_back(label, w.get<double>());
  }
  return cfg;
}

int first_int_after(const std::string& text, const std::string& marker, int fallback) {
  auto pos = text.find(marker);
  if (pos == std::string::npos) return fallback;
  pos += marker.size();
  int value = 0;
  bool any = false;
  while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
    value = value * 10 + (text[pos] - '0');
    any = true;
    ++pos;
  }
  return any ? value : fallback;
}

// The final quoted span of the prompt is the test input; everything quoted
// before it belongs to in-context examples.
std::string last_quoted_span(const std::string& text) {
  auto close = text.rfind('"');
  if (close == std::string::npos || close == 0) return {};
  auto open = text.rfind('"', close - 1);
  if (open == std::string::npos) return {};
  return text.substr(open + 1, close - open - 1);
}

std::string short_hex(std::uint64_t v) {
  char buf[9];
  std::snprintf(buf, sizeof(buf), "%08llx", static_cast<unsigned long long>(v & 0xffffffffULL));
  return buf;
}

}  // namespace

MockScript MockScript::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::CONFIG_INVALID, std::string("mock script: ") + e.what());
  }
  MockScript script;
  script.seed = j.value("seed", 0ULL);
  if (j.contains("gen_examples")) script.gen_examples = parse_purpose(j["gen_examples"]);
  if (j.contains("paraphrase")) script.paraphrase = parse_purpose(j["paraphrase"]);
  if (j.contains("evaluate")) script.evaluate = parse_purpose(j["evaluate"]);
  return script;
}

MockScript MockScript::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw Error(ErrorCode::FILE_NOT_FOUND, "mock script '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

MockBackend::MockBackend(MockScript script) : script_(std::move(script)) {}

std::shared_ptr<MockBackend> make_mock_backend(MockScript script) {
  return std::make_shared<MockBackend>(std::move(script));
}

ChatResponse MockBackend::send(const ModelEndpoint&, const ChatRequest& req) {
  const MockPurposeConfig* cfg = nullptr;
  switch (req.purpose) {
    case Purpose::GEN_EXAMPLES: cfg = &script_.gen_examples; break;
    case Purpose::PARAPHRASE: cfg = &script_.paraphrase; break;
    case Purpose::EVALUATE: cfg = &script_.evaluate; break;
  }
  ChatResponse resp;
  resp.text = respond(req, *cfg);
  resp.prompt_tokens = static_cast<long>(req.user_text.size() / 4);
  resp.completion_tokens = static_cast<long>(resp.text.size() / 4);
  return resp;
}

std::string MockBackend::respond(const ChatRequest& req, const MockPurposeConfig& cfg) {
  if (cfg.mode == MockPurposeConfig::Mode::FIXED) {
    std::lock_guard<std::mutex> lock(fixed_mu_);
    auto& idx = fixed_index_[static_cast<int>(req.purpose)];
    if (idx >= cfg.responses.size())
      throw Error(ErrorCode::SCRIPT_EXHAUSTED,
                  std::string("no scripted response left for ") + purpose_name(req.purpose));
    return cfg.responses[idx++];
  }

  const std::uint64_t rng_seed =
      script_.seed ^ fnv1a64(std::string(purpose_name(req.purpose)) + '\x1f' +
                             req.system_text + '\x1f' + req.user_text);
  switch (req.purpose) {
    case Purpose::GEN_EXAMPLES:
      return synth_examples(req.user_text, cfg, rng_seed);
    case Purpose::PARAPHRASE:
      return synth_paraphrases(req.user_text, rng_seed);
    case Purpose::EVALUATE:
      return synth_evaluation(req.user_text, cfg, rng_seed);
  }
  return {};
}

std::string MockBackend::synth_examples(const std::string& prompt,
                                        const MockPurposeConfig& cfg,
                                        std::uint64_t rng_seed) {
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const int count = first_int_after(prompt, "Create exactly ", 1);
  const bool question_form = prompt.find("Question: \"") != std::string::npos;
  const std::string body_field = question_form ? "Question" : "Sentence";
  const std::string label_field =
      prompt.find("\nAnswer:") != std::string::npos ? "Answer" : "Label";

  // Requested label, as substituted into the strict-format block.
  std::string label;
  {
    const std::string marker = "\n" + label_field + ": ";
    auto pos = prompt.find(marker);
    if (pos != std::string::npos) {
      pos += marker.size();
      auto end = prompt.find('\n', pos);
      label = prompt.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    }
  }
  const bool open_answer = label.empty() || label == "<answer>";

  // Topic + sentence-count schedule from the diversity plan lines.
  std::vector<std::string> topics;
  std::vector<int> sentence_counts;
  {
    std::istringstream lines(prompt);
    std::string line;
    while (std::getline(lines, line)) {
      auto tpos = line.find("topic: ");
      if (tpos == std::string::npos || line.empty() || line[0] != '-') continue;
      std::string topic = line.substr(tpos + 7);
      if (!topic.empty() && topic.back() == '.') topic.pop_back();
      topics.push_back(topic);
      int sc = first_int_after(line, "exactly ", 0);
      if (sc < 1 || sc > 3) sc = first_int_after(line, ": ", 1);
      if (sc < 1 || sc > 3) sc = 1;
      sentence_counts.push_back(sc);
    }
  }

  std::ostringstream out;
  int corruption_kind = 0;
  for (int i = 0; i < count; ++i) {
    const std::string topic =
        topics.empty() ? "general" : topics[static_cast<std::size_t>(i) % topics.size()];
    const int sentences =
        sentence_counts.empty() ? 1
                                : sentence_counts[static_cast<std::size_t>(i) %
                                                  sentence_counts.size()];
    const std::string tag = short_hex(rng());

    std::string body;
    for (int s = 0; s < sentences; ++s) {
      if (s) body += ' ';
      if (open_answer || question_form) {
        body += "A question about " + topic + " with value " + std::to_string(rng() % 90 + 10) +
                " (case " + tag + ").";
      } else {
        body += "Sample text about " + topic + " number " + tag + ".";
      }
    }
    std::string answer = open_answer ? std::to_string(rng() % 1000) : label;

    bool corrupt = unit(rng) < cfg.error_rate;
    if (corrupt) {
      switch (corruption_kind++ % 3) {
        case 0: answer = open_answer ? "not a number" : "mislabelled"; break;
        case 1: body.insert(body.size() / 2, "\""); break;
        case 2: break;  // omit the label line below
      }
    }
    out << "Example" << (i + 1) << ":\n";
    out << body_field << ": \"" << body << "\"\n";
    if (!(corrupt && (corruption_kind - 1) % 3 == 2))
      out << label_field << ": " << answer << "\n";
    out << "\n";
  }
  return out.str();
}

std::string MockBackend::synth_paraphrases(const std::string& prompt,
                                           std::uint64_t rng_seed) {
  std::mt19937_64 rng(rng_seed);
  const int n = first_int_after(prompt, "exactly ", 1);

  // The input follows the final header line ("Sentence:", "Problem:", ...).
  std::string input = prompt;
  auto sep = prompt.rfind("\n\n");
  if (sep != std::string::npos) {
    input = prompt.substr(sep + 2);
    auto nl = input.find('\n');
    if (nl != std::string::npos) input = input.substr(nl + 1);
  }
  for (char& c : input)
    if (c == '\n') c = ' ';

  std::ostringstream out;
  for (int i = 1; i <= n; ++i) {
    out << "To put it differently (v" << i << "-" << short_hex(rng()) << "): " << input << "\n";
  }
  return out.str();
}

std::string MockBackend::synth_evaluation(const std::string& prompt,
                                          const MockPurposeConfig& cfg,
                                          std::uint64_t rng_seed) {
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  if (cfg.mode == MockPurposeConfig::Mode::WEIGHTS) {
    double total = 0.0;
    for (const auto& [_, w] : cfg.weights) total += w;
    double draw = unit(rng) * total;
    for (const auto& [label, w] : cfg.weights) {
      draw -= w;
      if (draw <= 0.0) return label;
    }
    return cfg.weights.empty() ? std::string("?") : cfg.weights.back().first;
  }

  if (cfg.mode == MockPurposeConfig::Mode::ECHO) {
    if (cfg.labels.empty())
      throw Error(ErrorCode::CONFIG_INVALID, "echo evaluator needs a label list");
    const std::string input = last_quoted_span(prompt);
    std::string gold;
    for (const auto& label : cfg.labels) {
      if (input.find(label) != std::string::npos) {
        gold = label;
        break;
      }
    }
    if (gold.empty()) return cfg.labels[rng() % cfg.labels.size()];
    if (unit(rng) < cfg.echo_prob || cfg.labels.size() == 1) return gold;
    std::string other;
    do {
      other = cfg.labels[rng() % cfg.labels.size()];
    } while (other == gold);
    return other;
  }

  // SYNTHETIC default: a plausible free-text verdict ending in an answer token.
  return "The answer is " + std::to_string(rng() % 100);
}

}  // namespace promptvote

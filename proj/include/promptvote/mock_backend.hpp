#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "promptvote/gateway.hpp"

namespace promptvote {

/// Per-purpose behaviour of the offline test double.
struct MockPurposeConfig {
  enum class Mode {
    SYNTHETIC,  // derive a well-formed reply from the prompt itself
    FIXED,      // replay a fixed response list, SCRIPT_EXHAUSTED when consumed
    WEIGHTS,    // evaluate only: sample a label from a categorical distribution
    ECHO,       // evaluate only: emit the label embedded in the input with prob echo_prob
  };

  Mode mode = Mode::SYNTHETIC;
  std::vector<std::string> responses;
  double error_rate = 0.0;  // SYNTHETIC generation: fraction of malformed blocks
  std::vector<std::pair<std::string, double>> weights;
  double echo_prob = 1.0;
  std::vector<std::string> labels;
};

struct MockScript {
  std::uint64_t seed = 0;
  MockPurposeConfig gen_examples;
  MockPurposeConfig paraphrase;
  MockPurposeConfig evaluate;

  static MockScript from_json_text(const std::string& text);
  static MockScript from_file(const std::string& path);
};

/// Deterministic scripted backend. No network I/O. Synthetic responders draw
/// their randomness from (script seed, request content), so results do not
/// depend on call order or thread interleaving.
class MockBackend : public Backend {
 public:
  explicit MockBackend(MockScript script);
  ChatResponse send(const ModelEndpoint& endpoint, const ChatRequest& req) override;

 private:
  std::string respond(const ChatRequest& req, const MockPurposeConfig& cfg);
  std::string synth_examples(const std::string& prompt, const MockPurposeConfig& cfg,
                             std::uint64_t rng_seed);
  std::string synth_paraphrases(const std::string& prompt, std::uint64_t rng_seed);
  std::string synth_evaluation(const std::string& prompt, const MockPurposeConfig& cfg,
                               std::uint64_t rng_seed);

  MockScript script_;
  std::mutex fixed_mu_;
  std::size_t fixed_index_[3] = {0, 0, 0};
};

std::shared_ptr<MockBackend> make_mock_backend(MockScript script);

}  // namespace promptvote

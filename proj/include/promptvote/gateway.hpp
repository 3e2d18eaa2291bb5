#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

namespace promptvote {

enum class Role { GENERATOR, EVALUATOR };
enum class Purpose { GEN_EXAMPLES, PARAPHRASE, EVALUATE };

const char* purpose_name(Purpose p);

struct ModelEndpoint {
  Role role = Role::GENERATOR;
  std::string base_url;      // e.g. http://localhost:8000/v1
  std::string model_name;
  std::string api_key_env;   // env var holding the key ("" = no auth header)
  double temperature = 0.7;
  int max_tokens = 512;
  std::optional<std::int64_t> request_seed;
};

struct ChatRequest {
  std::string system_text;
  std::string user_text;
  Role role = Role::GENERATOR;
  Purpose purpose = Purpose::GEN_EXAMPLES;
};

struct ChatResponse {
  std::string text;
  long prompt_tokens = 0;
  long completion_tokens = 0;
  double latency_ms = 0.0;
  bool from_cache = false;
  int attempts = 1;
};

/// Transport abstraction. Implementations must be safe to call concurrently.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual ChatResponse send(const ModelEndpoint& endpoint, const ChatRequest& req) = 0;
};

struct GatewayConfig {
  int max_attempts = 3;
  int backoff_base_ms = 1000;  // doubled per retry
  int max_inflight_per_endpoint = 8;
  std::string cache_dir;       // "" disables the on-disk cache
  // Generator calls are not cached so repeated runs keep sampling fresh output.
  bool cache_evaluator = true;
  bool cache_generator = false;
};

struct CallStats {
  long calls = 0;
  long cache_hits = 0;
  long retries = 0;
  long prompt_tokens = 0;
  long completion_tokens = 0;
};

/// Content digest of everything that determines a completion. Purpose and
/// timing are deliberately excluded.
std::string cache_key(const ModelEndpoint& endpoint, const ChatRequest& req);

/// Shared front door for both models: routing, bounded concurrency, retry
/// with exponential backoff, and the response cache.
class Gateway {
 public:
  Gateway(ModelEndpoint generator, ModelEndpoint evaluator,
          std::shared_ptr<Backend> backend, GatewayConfig config = {});

  ChatResponse complete(const ChatRequest& req);

  const ModelEndpoint& endpoint(Role role) const;
  CallStats stats(Purpose purpose) const;
  long total_calls() const;
  void reset_stats();

 private:
  struct Slot {
    std::mutex mu;
    std::condition_variable cv;
    int inflight = 0;
  };

  ChatResponse send_with_retries(const ModelEndpoint& endpoint, const ChatRequest& req);
  bool cache_enabled_for(Purpose purpose) const;
  std::optional<ChatResponse> cache_load(const std::string& key) const;
  void cache_store(const std::string& key, const ChatResponse& resp) const;

  ModelEndpoint generator_;
  ModelEndpoint evaluator_;
  std::shared_ptr<Backend> backend_;
  GatewayConfig config_;
  mutable std::mutex stats_mu_;
  std::map<Purpose, CallStats> stats_;
  Slot gen_slot_;
  Slot eval_slot_;
};

/// HTTP backend speaking the OpenAI-compatible chat-completions protocol.
std::shared_ptr<Backend> make_http_backend();

}  // namespace promptvote

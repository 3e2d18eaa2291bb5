#include "promptvote/gateway.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "promptvote/digest.hpp"
#include "promptvote/errors.hpp"

namespace promptvote {

using json = nlohmann::json;
namespace fs = std::filesystem;

const char* purpose_name(Purpose p) {
  switch (p) {
    case Purpose::GEN_EXAMPLES: return "GEN_EXAMPLES";
    case Purpose::PARAPHRASE: return "PARAPHRASE";
    case Purpose::EVALUATE: return "EVALUATE";
  }
  return "GEN_EXAMPLES";
}

std::string cache_key(const ModelEndpoint& endpoint, const ChatRequest& req) {
  std::ostringstream os;
  os << endpoint.model_name << '\x1f' << req.system_text << '\x1f' << req.user_text
     << '\x1f' << endpoint.temperature << '\x1f' << endpoint.max_tokens << '\x1f';
  if (endpoint.request_seed) os << *endpoint.request_seed;
  return sha256_hex(os.str());
}

Gateway::Gateway(ModelEndpoint generator, ModelEndpoint evaluator,
                 std::shared_ptr<Backend> backend, GatewayConfig config)
    : generator_(std::move(generator)),
      evaluator_(std::move(evaluator)),
      backend_(std::move(backend)),
      config_(std::move(config)) {
  generator_.role = Role::GENERATOR;
  evaluator_.role = Role::EVALUATOR;
  if (!config_.cache_dir.empty()) fs::create_directories(config_.cache_dir);
}

const ModelEndpoint& Gateway::endpoint(Role role) const {
  return role == Role::GENERATOR ? generator_ : evaluator_;
}

bool Gateway::cache_enabled_for(Purpose purpose) const {
  if (config_.cache_dir.empty()) return false;
  return purpose == Purpose::EVALUATE ? config_.cache_evaluator : config_.cache_generator;
}

std::optional<ChatResponse> Gateway::cache_load(const std::string& key) const {
  const fs::path path = fs::path(config_.cache_dir) / (key + ".json");
  std::ifstream in(path);
  if (!in.good()) return std::nullopt;
  try {
    json j;
    in >> j;
    ChatResponse resp;
    resp.text = j.at("text").get<std::string>();
    resp.prompt_tokens = j.value("prompt_tokens", 0L);
    resp.completion_tokens = j.value("completion_tokens", 0L);
    resp.from_cache = true;
    return resp;
  } catch (const json::exception&) {
    return std::nullopt;  // corrupt entry, refetch
  }
}

void Gateway::cache_store(const std::string& key, const ChatResponse& resp) const {
  const fs::path path = fs::path(config_.cache_dir) / (key + ".json");
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    json j{{"text", resp.text},
           {"prompt_tokens", resp.prompt_tokens},
           {"completion_tokens", resp.completion_tokens}};
    out << j.dump();
  }
  fs::rename(tmp, path);
}

ChatResponse Gateway::send_with_retries(const ModelEndpoint& endpoint,
                                        const ChatRequest& req) {
  int backoff_ms = config_.backoff_base_ms;
  long retries = 0;
  for (int attempt = 1;; ++attempt) {
    try {
      ChatResponse resp = backend_->send(endpoint, req);
      if (resp.text.empty())
        throw Error(ErrorCode::EMPTY_COMPLETION, "backend returned no text");
      resp.attempts = attempt;
      if (retries) {
        std::lock_guard<std::mutex> lock(stats_mu_);
        stats_[req.purpose].retries += retries;
      }
      return resp;
    } catch (const Error& e) {
      const bool transient = e.code() == ErrorCode::BACKEND_UNREACHABLE ||
                             (e.code() == ErrorCode::HTTP_ERROR &&
                              (e.http_status == 429 || e.http_status >= 500));
      if (!transient || attempt >= config_.max_attempts) {
        if (e.code() == ErrorCode::BACKEND_UNREACHABLE && attempt >= config_.max_attempts)
          throw Error(ErrorCode::BACKEND_UNREACHABLE,
                      "gave up after " + std::to_string(attempt) + " attempts");
        throw;
      }
      ++retries;
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
      backoff_ms *= 2;
    }
  }
}

ChatResponse Gateway::complete(const ChatRequest& req) {
  if (req.user_text.empty())
    throw Error(ErrorCode::CONFIG_INVALID, "empty user_text");
  const ModelEndpoint& ep = endpoint(req.role);

  std::string key;
  if (cache_enabled_for(req.purpose)) {
    key = cache_key(ep, req);
    if (auto cached = cache_load(key)) {
      std::lock_guard<std::mutex> lock(stats_mu_);
      auto& s = stats_[req.purpose];
      ++s.calls;
      ++s.cache_hits;
      return *cached;
    }
  }

  Slot& slot = req.role == Role::GENERATOR ? gen_slot_ : eval_slot_;
  {
    std::unique_lock<std::mutex> lock(slot.mu);
    slot.cv.wait(lock, [&] { return slot.inflight < config_.max_inflight_per_endpoint; });
    ++slot.inflight;
  }
  ChatResponse resp;
  try {
    const auto start = std::chrono::steady_clock::now();
    resp = send_with_retries(ep, req);
    resp.latency_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  } catch (...) {
    std::lock_guard<std::mutex> lock(slot.mu);
    --slot.inflight;
    slot.cv.notify_one();
    throw;
  }
  {
    std::lock_guard<std::mutex> lock(slot.mu);
    --slot.inflight;
    slot.cv.notify_one();
  }

  if (!key.empty()) cache_store(key, resp);
  {
    std::lock_guard<std::mutex> lock(stats_mu_);
    auto& s = stats_[req.purpose];
    ++s.calls;
    s.prompt_tokens += resp.prompt_tokens;
    s.completion_tokens += resp.completion_tokens;
  }
  return resp;
}

CallStats Gateway::stats(Purpose purpose) const {
  std::lock_guard<std::mutex> lock(stats_mu_);
  auto it = stats_.find(purpose);
  return it == stats_.end() ? CallStats{} : it->second;
}

long Gateway::total_calls() const {
  std::lock_guard<std::mutex> lock(stats_mu_);
  long total = 0;
  for (const auto& [_, s] : stats_) total += s.calls;
  return total;
}

void Gateway::reset_stats() {
  std::lock_guard<std::mutex> lock(stats_mu_);
  stats_.clear();
}

}  // namespace promptvote

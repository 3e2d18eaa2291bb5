#include <atomic>
#include <filesystem>
#include <thread>

#include "doctest.h"
#include "promptvote/errors.hpp"
#include "promptvote/gateway.hpp"
#include "promptvote/mock_backend.hpp"

using namespace promptvote;
namespace fs = std::filesystem;

namespace {

ModelEndpoint ep(Role role, const std::string& model) {
  ModelEndpoint e;
  e.role = role;
  e.model_name = model;
  return e;
}

ChatRequest eval_request(const std::string& user) {
  ChatRequest req;
  req.user_text = user;
  req.role = Role::EVALUATOR;
  req.purpose = Purpose::EVALUATE;
  return req;
}

GatewayConfig fast_config() {
  GatewayConfig cfg;
  cfg.backoff_base_ms = 1;  // keep retry tests quick
  return cfg;
}

/// Scripted failure backend: fails the first `failures` sends, then succeeds.
class FlakyBackend : public Backend {
 public:
  FlakyBackend(int failures, int status) : failures_(failures), status_(status) {}
  ChatResponse send(const ModelEndpoint&, const ChatRequest&) override {
    ++sends;
    if (sends <= failures_) {
      if (status_ == 0) throw Error(ErrorCode::BACKEND_UNREACHABLE, "connection refused");
      Error e(ErrorCode::HTTP_ERROR, "status " + std::to_string(status_));
      e.http_status = status_;
      throw e;
    }
    ChatResponse resp;
    resp.text = "recovered";
    return resp;
  }
  std::atomic<int> sends{0};

 private:
  int failures_;
  int status_;
};

/// Tracks how many sends overlap in time.
class ConcurrencyProbe : public Backend {
 public:
  ChatResponse send(const ModelEndpoint&, const ChatRequest&) override {
    const int now = ++inflight;
    int seen = peak.load();
    while (now > seen && !peak.compare_exchange_weak(seen, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
    --inflight;
    ChatResponse resp;
    resp.text = "ok";
    return resp;
  }
  std::atomic<int> inflight{0};
  std::atomic<int> peak{0};
};

Gateway make(std::shared_ptr<Backend> backend, GatewayConfig cfg = fast_config()) {
  return Gateway(ep(Role::GENERATOR, "gen-m"), ep(Role::EVALUATOR, "eval-m"),
                 std::move(backend), std::move(cfg));
}

}  // namespace

TEST_CASE("cache_key is stable and content-sensitive") {
  ModelEndpoint e = ep(Role::EVALUATOR, "m");
  ChatRequest req = eval_request("hello");
  CHECK(cache_key(e, req) == cache_key(e, req));

  ChatRequest other = req;
  other.user_text = "hello!";
  CHECK(cache_key(e, req) != cache_key(e, other));

  ModelEndpoint warm = e;
  warm.temperature = 0.9;
  CHECK(cache_key(e, req) != cache_key(warm, req));

  // Purpose does not participate in the key.
  ChatRequest as_para = req;
  as_para.purpose = Purpose::PARAPHRASE;
  CHECK(cache_key(e, req) == cache_key(e, as_para));
}

TEST_CASE("evaluator responses round-trip through the on-disk cache") {
  const fs::path dir = fs::temp_directory_path() / "pv_cache_test";
  fs::remove_all(dir);
  GatewayConfig cfg = fast_config();
  cfg.cache_dir = dir.string();

  MockScript script;
  script.evaluate.mode = MockPurposeConfig::Mode::FIXED;
  script.evaluate.responses = {"first answer", "second answer"};
  Gateway gateway = make(make_mock_backend(script), cfg);

  ChatResponse a = gateway.complete(eval_request("question one"));
  CHECK(a.text == "first answer");
  CHECK_FALSE(a.from_cache);

  ChatResponse b = gateway.complete(eval_request("question one"));
  CHECK(b.text == "first answer");  // not "second answer": served from cache
  CHECK(b.from_cache);
  CHECK(gateway.stats(Purpose::EVALUATE).cache_hits == 1);
  CHECK(gateway.stats(Purpose::EVALUATE).calls == 2);
  fs::remove_all(dir);
}

TEST_CASE("generator calls bypass the cache by default") {
  const fs::path dir = fs::temp_directory_path() / "pv_cache_gen_test";
  fs::remove_all(dir);
  GatewayConfig cfg = fast_config();
  cfg.cache_dir = dir.string();

  MockScript script;
  script.gen_examples.mode = MockPurposeConfig::Mode::FIXED;
  script.gen_examples.responses = {"take one", "take two"};
  Gateway gateway = make(make_mock_backend(script), cfg);

  ChatRequest req;
  req.user_text = "same prompt";
  req.role = Role::GENERATOR;
  req.purpose = Purpose::GEN_EXAMPLES;
  CHECK(gateway.complete(req).text == "take one");
  CHECK(gateway.complete(req).text == "take two");
  CHECK(gateway.stats(Purpose::GEN_EXAMPLES).cache_hits == 0);
  fs::remove_all(dir);
}

TEST_CASE("transient failures are retried with attempts recorded") {
  for (int status : {0, 429, 500, 503}) {
    CAPTURE(status);
    auto backend = std::make_shared<FlakyBackend>(2, status);
    Gateway gateway = make(backend);
    ChatResponse resp = gateway.complete(eval_request("q"));
    CHECK(resp.text == "recovered");
    CHECK(resp.attempts == 3);
    CHECK(backend->sends == 3);
    CHECK(gateway.stats(Purpose::EVALUATE).retries == 2);
  }
}

TEST_CASE("permanent transport failure gives up after the attempt cap") {
  auto backend = std::make_shared<FlakyBackend>(100, 0);
  Gateway gateway = make(backend);
  CHECK_THROWS_AS(gateway.complete(eval_request("q")), Error);
  CHECK(backend->sends == 3);  // default max_attempts
}

TEST_CASE("client errors are not retried") {
  auto backend = std::make_shared<FlakyBackend>(100, 400);
  Gateway gateway = make(backend);
  try {
    gateway.complete(eval_request("q"));
    FAIL("expected HTTP_ERROR");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::HTTP_ERROR);
    CHECK(e.http_status == 400);
  }
  CHECK(backend->sends == 1);
}

TEST_CASE("empty completion is surfaced as an error") {
  MockScript script;
  script.evaluate.mode = MockPurposeConfig::Mode::FIXED;
  script.evaluate.responses = {""};
  Gateway gateway = make(make_mock_backend(script));
  try {
    gateway.complete(eval_request("q"));
    FAIL("expected EMPTY_COMPLETION");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EMPTY_COMPLETION);
  }
}

TEST_CASE("per-endpoint concurrency stays within the configured bound") {
  auto probe = std::make_shared<ConcurrencyProbe>();
  GatewayConfig cfg = fast_config();
  cfg.max_inflight_per_endpoint = 2;
  Gateway gateway = make(probe, cfg);

  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i)
    threads.emplace_back([&gateway, i] {
      ChatResponse r = gateway.complete(eval_request("q" + std::to_string(i)));
      CHECK(r.text == "ok");
    });
  for (auto& t : threads) t.join();
  CHECK(probe->peak <= 2);
  CHECK(gateway.stats(Purpose::EVALUATE).calls == 8);
}

TEST_CASE("fixed mock scripts raise once exhausted") {
  MockScript script;
  script.evaluate.mode = MockPurposeConfig::Mode::FIXED;
  script.evaluate.responses = {"A"};
  Gateway gateway = make(make_mock_backend(script));
  CHECK(gateway.complete(eval_request("q")).text == "A");
  try {
    gateway.complete(eval_request("q"));
    FAIL("expected SCRIPT_EXHAUSTED");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SCRIPT_EXHAUSTED);
  }
}

TEST_CASE("mock responses are deterministic in content, not call order") {
  MockScript script;
  script.seed = 42;
  auto backend_a = make_mock_backend(script);
  auto backend_b = make_mock_backend(script);
  ModelEndpoint e = ep(Role::EVALUATOR, "m");

  ChatRequest q1 = eval_request("Sentence: \"first input\"\nLabel:");
  ChatRequest q2 = eval_request("Sentence: \"second input\"\nLabel:");
  // backend_a sees q1 then q2; backend_b sees q2 then q1.
  std::string a1 = backend_a->send(e, q1).text;
  std::string a2 = backend_a->send(e, q2).text;
  std::string b2 = backend_b->send(e, q2).text;
  std::string b1 = backend_b->send(e, q1).text;
  CHECK(a1 == b1);
  CHECK(a2 == b2);

  MockScript reseeded = script;
  reseeded.seed = 43;
  CHECK(make_mock_backend(reseeded)->send(e, q1).text != "");
}

TEST_CASE("weighted mock evaluator tracks its categorical distribution") {
  MockScript script;
  script.seed = 5;
  script.evaluate.mode = MockPurposeConfig::Mode::WEIGHTS;
  script.evaluate.weights = {{"positive", 0.7}, {"negative", 0.3}};
  auto backend = make_mock_backend(script);
  ModelEndpoint e = ep(Role::EVALUATOR, "m");

  int positives = 0;
  const int trials = 4000;
  for (int i = 0; i < trials; ++i) {
    ChatRequest req = eval_request("input #" + std::to_string(i));
    std::string out = backend->send(e, req).text;
    REQUIRE((out == "positive" || out == "negative"));
    if (out == "positive") ++positives;
  }
  const double frequency = static_cast<double>(positives) / trials;
  CHECK(frequency > 0.65);
  CHECK(frequency < 0.75);
}

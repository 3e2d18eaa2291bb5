#include <chrono>
#include <cstdlib>
#include <memory>
#include <string>

#include "httplib.h"
#include "json.hpp"
#include "promptvote/errors.hpp"
#include "promptvote/gateway.hpp"

namespace promptvote {

using json = nlohmann::json;

namespace {

struct ParsedUrl {
  std::string scheme_host_port;  // what httplib::Client wants
  std::string path_prefix;       // e.g. /v1
};

ParsedUrl parse_base_url(const std::string& base_url) {
  auto scheme_end = base_url.find("://");
  if (scheme_end == std::string::npos)
    throw Error(ErrorCode::CONFIG_INVALID, "base_url missing scheme: " + base_url);
  auto path_start = base_url.find('/', scheme_end + 3);
  ParsedUrl out;
  if (path_start == std::string::npos) {
    out.scheme_host_port = base_url;
  } else {
    out.scheme_host_port = base_url.substr(0, path_start);
    out.path_prefix = base_url.substr(path_start);
    while (!out.path_prefix.empty() && out.path_prefix.back() == '/')
      out.path_prefix.pop_back();
  }
  return out;
}

class HttpBackend : public Backend {
 public:
  ChatResponse send(const ModelEndpoint& endpoint, const ChatRequest& req) override {
    const ParsedUrl url = parse_base_url(endpoint.base_url);
    httplib::Client client(url.scheme_host_port);
    client.set_connection_timeout(10);
    client.set_read_timeout(300);

    json body{{"model", endpoint.model_name},
              {"temperature", endpoint.temperature},
              {"max_tokens", endpoint.max_tokens}};
    json messages = json::array();
    if (!req.system_text.empty())
      messages.push_back({{"role", "system"}, {"content", req.system_text}});
    messages.push_back({{"role", "user"}, {"content", req.user_text}});
    body["messages"] = std::move(messages);
    if (endpoint.request_seed) body["seed"] = *endpoint.request_seed;

    httplib::Headers headers;
    if (!endpoint.api_key_env.empty()) {
      const char* key = std::getenv(endpoint.api_key_env.c_str());
      if (key && *key) headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    auto result = client.Post(url.path_prefix + "/chat/completions", headers, body.dump(),
                              "application/json");
    if (!result) {
      throw Error(ErrorCode::BACKEND_UNREACHABLE,
                  endpoint.base_url + ": " + httplib::to_string(result.error()));
    }
    if (result->status < 200 || result->status >= 300) {
      Error err(ErrorCode::HTTP_ERROR,
                "status " + std::to_string(result->status) + " from " + endpoint.base_url);
      err.http_status = result->status;
      throw err;
    }

    ChatResponse resp;
    try {
      json j = json::parse(result->body);
      resp.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
      if (j.contains("usage")) {
        resp.prompt_tokens = j["usage"].value("prompt_tokens", 0L);
        resp.completion_tokens = j["usage"].value("completion_tokens", 0L);
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::HTTP_ERROR, std::string("unparseable response: ") + e.what());
    }
    return resp;
  }
};

}  // namespace

std::shared_ptr<Backend> make_http_backend() { return std::make_shared<HttpBackend>(); }

}  // namespace promptvote

#ifndef RELREWARD_SYNTH_CLIENT_HPP_
#define RELREWARD_SYNTH_CLIENT_HPP_

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "httplib.h"
#include "json.hpp"

namespace relreward::synth {

using Json = nlohmann::ordered_json;

struct ChatMessage {
  std::string role;  // "system" | "user" | "assistant"
  std::string content;
};

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  std::int64_t seed = 42;
  Json decoding = Json::object();  // extra body fields, e.g. {"temperature": 0}
};

// Any failure to obtain an assistant reply.
struct TransportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class ChatClient {
 public:
  virtual ~ChatClient() = default;
  // The assistant reply to the conversation so far.
  virtual std::string complete(const ChatRequest& req) = 0;
  virtual std::string endpoint() const = 0;
};

// Chat-completion request body: {model, messages, seed, ...decoding}.
inline Json request_body(const ChatRequest& req) {
  Json body;
  body["model"] = req.model;
  Json msgs = Json::array();
  for (const auto& m : req.messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
  body["messages"] = std::move(msgs);
  body["seed"] = req.seed;
  if (!req.decoding.is_object()) throw std::invalid_argument("decoding parameters must be a JSON object");
  for (const auto& [k, v] : req.decoding.items()) {
    if (k == "model" || k == "messages" || k == "seed") {
      throw std::invalid_argument("decoding parameters may not override '" + k + "'");
    }
    body[k] = v;
  }
  return body;
}

// Request-rate ceiling: successive acquisitions are spaced at least
// 60 / max_per_minute seconds apart, across every client sharing the limiter.
// 0 disables the ceiling.
class RateLimiter {
 public:
  using Clock = std::chrono::steady_clock;

  explicit RateLimiter(double max_per_minute) : max_per_minute_(max_per_minute) {
    if (!(max_per_minute >= 0.0)) throw std::invalid_argument("rate ceiling must be >= 0");
  }

  void acquire() {
    if (max_per_minute_ == 0.0) return;
    const auto interval = std::chrono::duration_cast<Clock::duration>(
        std::chrono::duration<double>(60.0 / max_per_minute_));
    Clock::time_point slot;
    {
      std::lock_guard<std::mutex> lock(mu_);
      slot = std::max(Clock::now(), next_);
      next_ = slot + interval;
    }
    std::this_thread::sleep_until(slot);
  }

 private:
  double max_per_minute_;
  std::mutex mu_;
  Clock::time_point next_{};
};

struct HttpClientConfig {
  std::string url = "https://api.openai.com/v1/chat/completions";
  std::string api_key;
  int timeout_seconds = 120;
  std::shared_ptr<RateLimiter> limiter = std::make_shared<RateLimiter>(20.0);
};

inline constexpr const char* kApiKeyEnv = "REWARD_SYNTH_API_KEY";

// Reads the credential from REWARD_SYNTH_API_KEY; throws when it is unset.
inline std::string api_key_from_env() {
  const char* k = std::getenv(kApiKeyEnv);
  if (!k || !*k) throw std::invalid_argument(std::string(kApiKeyEnv) + " is not set");
  return k;
}

// Live chat-completion endpoint over HTTP(S), bearer-token authenticated.
class HttpChatClient final : public ChatClient {
 public:
  explicit HttpChatClient(HttpClientConfig cfg) : cfg_(std::move(cfg)) {
    auto scheme = cfg_.url.find("://");
    if (scheme == std::string::npos) throw std::invalid_argument("endpoint URL needs a scheme: " + cfg_.url);
    auto slash = cfg_.url.find('/', scheme + 3);
    origin_ = cfg_.url.substr(0, slash);
    path_ = slash == std::string::npos ? "/" : cfg_.url.substr(slash);
    if (cfg_.api_key.empty()) throw std::invalid_argument("missing API key");
  }

  std::string complete(const ChatRequest& req) override {
    if (cfg_.limiter) cfg_.limiter->acquire();
    httplib::Client cli(origin_);
    cli.set_connection_timeout(cfg_.timeout_seconds, 0);
    cli.set_read_timeout(cfg_.timeout_seconds, 0);
    cli.set_bearer_token_auth(cfg_.api_key);
    auto res = cli.Post(path_, request_body(req).dump(), "application/json");
    if (!res) throw TransportError("request to " + cfg_.url + " failed: " + httplib::to_string(res.error()));
    if (res->status < 200 || res->status >= 300) {
      throw TransportError("HTTP " + std::to_string(res->status) + " from " + cfg_.url + ": " +
                           res->body.substr(0, 300));
    }
    try {
      Json j = Json::parse(res->body);
      return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const Json::exception& e) {
      throw TransportError(std::string("malformed chat-completion response: ") + e.what());
    }
  }

  std::string endpoint() const override { return cfg_.url; }

 private:
  HttpClientConfig cfg_;
  std::string origin_, path_;
};

// Replays the assistant turns of a stored transcript. Each request must match
// the stored conversation prefix exactly, so a replay also checks that the
// prompts have not drifted.
class OfflineClient final : public ChatClient {
 public:
  explicit OfflineClient(const Json& transcript, std::string source = "offline transcript")
      : source_(std::move(source)) {
    for (const auto& m : transcript.at("messages")) {
      messages_.push_back({m.at("role").get<std::string>(), m.at("content").get<std::string>()});
    }
  }

  std::string complete(const ChatRequest& req) override {
    const auto n = req.messages.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (i >= messages_.size()) throw TransportError(source_ + " ends before message " + std::to_string(i));
      if (messages_[i].role != req.messages[i].role || messages_[i].content != req.messages[i].content) {
        throw TransportError(source_ + " diverges from the request at message " + std::to_string(i) +
                             " (" + req.messages[i].role + ")");
      }
    }
    if (n >= messages_.size() || messages_[n].role != "assistant") {
      throw TransportError(source_ + " has no assistant reply after message " + std::to_string(n));
    }
    return messages_[n].content;
  }

  std::string endpoint() const override { return "offline:" + source_; }

 private:
  std::string source_;
  std::vector<ChatMessage> messages_;
};

}  // namespace relreward::synth

#endif  // RELREWARD_SYNTH_CLIENT_HPP_

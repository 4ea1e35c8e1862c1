#include "mwploc/llmclient.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mwploc/error.hpp"
#include "mwploc/hashing.hpp"
#include "mwploc/log.hpp"

namespace mwploc::llm {

using nlohmann::json;

void validate(const LlmRequest& req) {
  if (req.prompt.empty()) throw std::invalid_argument("LLM request prompt must be non-empty");
  if (req.temperature != 0.0) throw std::invalid_argument("LLM requests are sent at temperature 0");
  if (req.max_output <= 0) throw std::invalid_argument("LLM request max_output must be positive");
}

std::string complete_with_retries(LlmClient& llm, const LlmRequest& req, int extra_attempts) {
  for (int attempt = 0;; ++attempt) {
    try {
      return llm.complete(req);
    } catch (const AuthError&) {
      throw;
    } catch (const TransportError& e) {
      if (attempt >= extra_attempts) throw;
      log::warning("request " + req.tag + " failed (" + e.what() + "), retrying");
    }
  }
}

// ---------------------------------------------------------------------------

namespace {

class SystemClock final : public Clock {
 public:
  TimePoint now() override { return std::chrono::steady_clock::now(); }
  void sleep_for(Duration d) override {
    if (d.count() > 0) std::this_thread::sleep_for(d);
  }
};

}  // namespace

std::shared_ptr<Clock> system_clock() {
  static auto clock = std::make_shared<SystemClock>();
  return clock;
}

namespace {

std::size_t capacity_for(double per_minute) {
  if (!(per_minute > 0)) throw ValidationError("rate limit must be positive");
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(per_minute)));
}

}  // namespace

RateLimiter::RateLimiter(double per_minute, std::shared_ptr<Clock> clock)
    : capacity_(capacity_for(per_minute)),
      window_(60.0 * static_cast<double>(capacity_for(per_minute)) / per_minute),
      clock_(std::move(clock)) {}

Clock::TimePoint RateLimiter::acquire() {
  std::lock_guard lock(mu_);
  for (;;) {
    const auto now = clock_->now();
    while (!recent_.empty() && recent_.front() + window_ <= now) recent_.pop_front();
    if (recent_.size() < capacity_) {
      recent_.push_back(now);
      return now;
    }
    clock_->sleep_for(recent_.front() + window_ - now);
  }
}

// ---------------------------------------------------------------------------

void validate(const ProviderConfig& cfg) {
  if (cfg.endpoint.empty()) throw ValidationError("provider endpoint must be set");
  if (cfg.model_name.empty()) throw ValidationError("provider model must be set");
  if (!(cfg.rate_limit_rpm > 0)) throw ValidationError("provider rate limit must be positive");
  if (!(cfg.timeout_seconds > 0)) throw ValidationError("provider timeout must be positive");
  if (cfg.retry.max_attempts < 1) throw ValidationError("retry max_attempts must be at least 1");
  if (cfg.retry.backoff_base_seconds < 0) throw ValidationError("retry backoff must be non-negative");
}

ProviderConfig default_provider(std::string_view provider) {
  ProviderConfig cfg;
  cfg.provider = std::string(provider);
  if (provider == "openai") {
    cfg.endpoint = "https://api.openai.com/v1/chat/completions";
    cfg.model_name = "gpt-4o-mini";
    cfg.auth_env = "OPENAI_API_KEY";
  } else if (provider == "gemini") {
    cfg.endpoint = "https://generativelanguage.googleapis.com/v1beta/models/{model}:generateContent";
    cfg.model_name = "gemini-2.5-pro";
    cfg.auth_env = "GEMINI_API_KEY";
  } else {
    throw ValidationError("unknown provider '" + std::string(provider) + "'");
  }
  return cfg;
}

bool is_retryable_status(int status) { return status == 408 || status == 429 || (status >= 500 && status <= 599); }

namespace {

std::string snippet(std::string_view body) {
  constexpr std::size_t kMax = 200;
  return std::string(body.substr(0, kMax)) + (body.size() > kMax ? "..." : "");
}

json parse_body(std::string_view body) {
  json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded()) throw TransportError("provider returned malformed JSON: " + snippet(body));
  return doc;
}

void add_tag_header(HttpRequest& http, const LlmRequest& req, const ProviderConfig& cfg) {
  if (cfg.tag_header && !req.tag.empty()) http.headers.emplace_back("X-Client-Request-Tag", req.tag);
}

/// OpenAI-style chat completions.
class ChatCompletionsAdapter final : public WireAdapter {
 public:
  HttpRequest build(const LlmRequest& req, const ProviderConfig& cfg, std::string_view api_key) const override {
    json body = {{"model", cfg.model_name},
                 {"messages", json::array({{{"role", "user"}, {"content", req.prompt}}})},
                 {"temperature", req.temperature},
                 {"max_tokens", req.max_output}};
    HttpRequest http;
    http.url = cfg.endpoint;
    http.headers = {{"Authorization", "Bearer " + std::string(api_key)}};
    add_tag_header(http, req, cfg);
    http.body = body.dump();
    http.timeout_seconds = cfg.timeout_seconds;
    return http;
  }

  std::string parse(std::string_view body) const override {
    const json doc = parse_body(body);
    const json* content = nullptr;
    if (doc.contains("choices") && doc["choices"].is_array() && !doc["choices"].empty()) {
      const auto& msg = doc["choices"][0].value("message", json::object());
      if (msg.contains("content") && msg["content"].is_string()) content = &msg["content"];
      if (content) return content->get<std::string>();
    }
    throw TransportError("provider response has no completion text: " + snippet(body));
  }
};

/// Gemini generateContent.
class GenerateContentAdapter final : public WireAdapter {
 public:
  HttpRequest build(const LlmRequest& req, const ProviderConfig& cfg, std::string_view api_key) const override {
    json body = {{"contents", json::array({{{"role", "user"}, {"parts", json::array({{{"text", req.prompt}}})}}})},
                 {"generationConfig", {{"temperature", req.temperature}, {"maxOutputTokens", req.max_output}}}};
    HttpRequest http;
    http.url = cfg.endpoint;
    if (auto pos = http.url.find("{model}"); pos != std::string::npos) http.url.replace(pos, 7, cfg.model_name);
    http.headers = {{"x-goog-api-key", std::string(api_key)}};
    add_tag_header(http, req, cfg);
    http.body = body.dump();
    http.timeout_seconds = cfg.timeout_seconds;
    return http;
  }

  std::string parse(std::string_view body) const override {
    const json doc = parse_body(body);
    if (doc.contains("candidates") && doc["candidates"].is_array() && !doc["candidates"].empty()) {
      const auto& content = doc["candidates"][0].value("content", json::object());
      if (content.contains("parts") && content["parts"].is_array()) {
        std::string text;
        bool any = false;
        for (const auto& part : content["parts"]) {
          if (part.contains("text") && part["text"].is_string()) {
            text += part["text"].get<std::string>();
            any = true;
          }
        }
        if (any) return text;
      }
    }
    throw TransportError("provider response has no completion text: " + snippet(body));
  }
};

}  // namespace

std::unique_ptr<WireAdapter> make_adapter(std::string_view provider) {
  if (provider == "openai") return std::make_unique<ChatCompletionsAdapter>();
  if (provider == "gemini") return std::make_unique<GenerateContentAdapter>();
  throw ValidationError("no wire adapter for provider '" + std::string(provider) + "'");
}

HttpLlmClient::HttpLlmClient(ProviderConfig cfg, std::string api_key, std::unique_ptr<Transport> transport,
                             std::shared_ptr<Clock> clock)
    : cfg_(std::move(cfg)),
      api_key_(std::move(api_key)),
      adapter_(make_adapter(cfg_.provider)),
      transport_(std::move(transport)),
      clock_(std::move(clock)),
      limiter_(cfg_.rate_limit_rpm, clock_) {
  validate(cfg_);
  log::register_secret(api_key_);
}

std::string HttpLlmClient::complete(const LlmRequest& req) {
  validate(req);
  const HttpRequest http = adapter_->build(req, cfg_, api_key_);
  std::string last_error;
  for (int attempt = 1; attempt <= cfg_.retry.max_attempts; ++attempt) {
    limiter_.acquire();
    {
      std::lock_guard lock(count_mu_);
      ++requests_;
    }
    std::optional<HttpResponse> resp;
    try {
      resp = transport_->post(http);
    } catch (const TransportError& e) {
      last_error = log::scrub(e.what());
    }
    if (resp) {
      if (resp->status >= 200 && resp->status < 300) return adapter_->parse(resp->body);
      const std::string detail = log::scrub("HTTP " + std::to_string(resp->status) + ": " + snippet(resp->body));
      if (resp->status == 401 || resp->status == 403) throw AuthError(detail);
      if (!is_retryable_status(resp->status)) throw TransportError(detail);
      last_error = detail;
    }
    if (attempt < cfg_.retry.max_attempts) {
      const double delay = cfg_.retry.backoff_base_seconds * std::pow(2.0, attempt - 1);
      log::info("request " + req.tag + " attempt " + std::to_string(attempt) + " failed (" + last_error +
                "), backing off");
      clock_->sleep_for(Clock::Duration(delay));
    }
  }
  throw TransportError(log::scrub("gave up after " + std::to_string(cfg_.retry.max_attempts) +
                                  " attempts: " + last_error));
}

std::size_t HttpLlmClient::request_count() const {
  std::lock_guard lock(count_mu_);
  return requests_;
}

std::unique_ptr<LlmClient> make_live_client(const ProviderConfig& cfg) {
  validate(cfg);
  const char* key = cfg.auth_env.empty() ? nullptr : std::getenv(cfg.auth_env.c_str());
  if (!key || !*key)
    throw AuthError("environment variable " + (cfg.auth_env.empty() ? std::string("<unset>") : cfg.auth_env) +
                    " holds no API key");
  return std::make_unique<HttpLlmClient>(cfg, key, make_http_transport());
}

// ---------------------------------------------------------------------------

std::string prompt_key(std::string_view prompt) { return "prompt:" + hashing::to_hex(hashing::stable_hash(prompt)); }

MockLlmClient::MockLlmClient(std::map<std::string, std::string> fixtures) : fixtures_(std::move(fixtures)) {}

std::unique_ptr<MockLlmClient> MockLlmClient::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

std::unique_ptr<MockLlmClient> MockLlmClient::parse(std::string_view text, const std::string& source) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) return std::make_unique<MockLlmClient>();

  std::vector<std::set<std::string>> seen;
  std::string duplicate;
  json::parser_callback_t detect = [&](int, json::parse_event_t event, json& parsed) {
    switch (event) {
      case json::parse_event_t::object_start: seen.emplace_back(); break;
      case json::parse_event_t::object_end: seen.pop_back(); break;
      case json::parse_event_t::key:
        if (!seen.back().insert(parsed.get<std::string>()).second && duplicate.empty())
          duplicate = parsed.get<std::string>();
        break;
      default: break;
    }
    return true;
  };
  json doc;
  try {
    doc = json::parse(text, detect);
  } catch (const json::parse_error& e) {
    throw ParseError(source, 0, std::string("malformed fixture file: ") + e.what());
  }
  if (!duplicate.empty()) throw ParseError(source, 0, "duplicate fixture key '" + duplicate + "'");
  if (!doc.is_object()) throw ParseError(source, 0, "fixture file must hold one JSON object");
  std::map<std::string, std::string> fixtures;
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_string()) throw ParseError(source, 0, "fixture '" + key + "' must be a string");
    fixtures.emplace(key, value.get<std::string>());
  }
  return std::make_unique<MockLlmClient>(std::move(fixtures));
}

std::string MockLlmClient::complete(const LlmRequest& req) {
  validate(req);
  TranscriptEntry entry{req.tag, prompt_key(req.prompt), {}};
  const std::string* response = nullptr;
  for (const auto& key : {entry.prompt_key, req.tag}) {
    if (key.empty()) continue;
    if (auto it = fixtures_.find(key); it != fixtures_.end()) {
      entry.matched_key = key;
      response = &it->second;
      break;
    }
  }
  {
    std::lock_guard lock(mu_);
    transcript_.push_back(entry);
  }
  if (!response)
    throw MissingFixtureError("missing fixture for tag '" + req.tag + "' (" + entry.prompt_key + ")");
  return *response;
}

std::size_t MockLlmClient::request_count() const {
  std::lock_guard lock(mu_);
  return transcript_.size();
}

std::vector<TranscriptEntry> MockLlmClient::transcript() const {
  std::lock_guard lock(mu_);
  return transcript_;
}

}  // namespace mwploc::llm

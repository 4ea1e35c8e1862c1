#pragma once

#include <chrono>
#include <cstddef>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mwploc::llm {

struct LlmRequest {
  std::string prompt;
  double temperature = 0.0;
  int max_output = 1024;
  std::string tag;  // pipeline stage label, e.g. "extract:r1"
};

/// Throws std::invalid_argument: temperature must be 0 and the prompt
/// non-empty.
void validate(const LlmRequest& req);

class LlmClient {
 public:
  virtual ~LlmClient() = default;
  virtual std::string complete(const LlmRequest& req) = 0;
  virtual std::size_t request_count() const = 0;
};

/// Calls `llm.complete`, repeating up to `extra_attempts` times after a
/// TransportError. AuthError and every other failure propagate at once.
std::string complete_with_retries(LlmClient& llm, const LlmRequest& req, int extra_attempts);

// ---------------------------------------------------------------------------
// Time

class Clock {
 public:
  using Duration = std::chrono::duration<double>;
  using TimePoint = std::chrono::time_point<std::chrono::steady_clock, Duration>;

  virtual ~Clock() = default;
  virtual TimePoint now() = 0;
  virtual void sleep_for(Duration d) = 0;
};

std::shared_ptr<Clock> system_clock();

/// At most `per_minute` acquisitions inside any half-open 60 s window.
class RateLimiter {
 public:
  RateLimiter(double per_minute, std::shared_ptr<Clock> clock);

  /// Blocks (through the clock) until a slot is free and takes it.
  Clock::TimePoint acquire();

 private:
  std::size_t capacity_;
  Clock::Duration window_;
  std::shared_ptr<Clock> clock_;
  std::mutex mu_;
  std::deque<Clock::TimePoint> recent_;
};

// ---------------------------------------------------------------------------
// Wire

struct HttpRequest {
  std::string url;
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;
  double timeout_seconds = 60.0;
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// Throws TransportError for connection failures and timeouts.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse post(const HttpRequest& req) = 0;
};

std::unique_ptr<Transport> make_http_transport();

struct RetryPolicy {
  int max_attempts = 3;
  double backoff_base_seconds = 1.0;  // delay before retry n is base * 2^(n-1)
};

struct ProviderConfig {
  std::string provider = "openai";  // selects the wire adapter
  std::string endpoint;
  std::string model_name;
  std::string auth_env;  // environment variable holding the API key
  double rate_limit_rpm = 60.0;
  double timeout_seconds = 60.0;
  RetryPolicy retry;
  /// Sends the request tag in a header so providers that cache on the body
  /// see distinct requests.
  bool tag_header = false;
};

/// Throws ValidationError.
void validate(const ProviderConfig& cfg);

/// Endpoint, model and key variable defaults for "openai" and "gemini".
ProviderConfig default_provider(std::string_view provider);

/// Translates between LlmRequest and one provider's JSON shape.
class WireAdapter {
 public:
  virtual ~WireAdapter() = default;
  virtual HttpRequest build(const LlmRequest& req, const ProviderConfig& cfg,
                            std::string_view api_key) const = 0;
  /// Throws TransportError when the body has no completion text.
  virtual std::string parse(std::string_view body) const = 0;
};

std::unique_ptr<WireAdapter> make_adapter(std::string_view provider);

/// True for statuses worth retrying: 408, 429 and 5xx.
bool is_retryable_status(int status);

class HttpLlmClient final : public LlmClient {
 public:
  HttpLlmClient(ProviderConfig cfg, std::string api_key, std::unique_ptr<Transport> transport,
                std::shared_ptr<Clock> clock = system_clock());

  std::string complete(const LlmRequest& req) override;
  std::size_t request_count() const override;

 private:
  ProviderConfig cfg_;
  std::string api_key_;
  std::unique_ptr<WireAdapter> adapter_;
  std::unique_ptr<Transport> transport_;
  std::shared_ptr<Clock> clock_;
  RateLimiter limiter_;
  mutable std::mutex count_mu_;
  std::size_t requests_ = 0;
};

/// Reads the API key from cfg.auth_env. Throws AuthError when unset or empty.
std::unique_ptr<LlmClient> make_live_client(const ProviderConfig& cfg);

// ---------------------------------------------------------------------------
// Scripted mock

/// Key under which a fixture can address one exact prompt.
std::string prompt_key(std::string_view prompt);

struct TranscriptEntry {
  std::string tag;
  std::string prompt_key;
  std::string matched_key;  // empty when no fixture matched

  bool operator==(const TranscriptEntry&) const = default;
};

/// Answers from a fixture map, looking up prompt_key(prompt) first and the
/// request tag second. Unknown requests throw MissingFixtureError.
class MockLlmClient final : public LlmClient {
 public:
  explicit MockLlmClient(std::map<std::string, std::string> fixtures = {});

  /// Fixture file: one JSON object mapping keys to response strings. An empty
  /// file is an empty fixture set. Duplicate keys are rejected.
  static std::unique_ptr<MockLlmClient> load(const std::filesystem::path& path);
  static std::unique_ptr<MockLlmClient> parse(std::string_view text,
                                              const std::string& source = {});

  std::string complete(const LlmRequest& req) override;
  std::size_t request_count() const override;
  std::vector<TranscriptEntry> transcript() const;

 private:
  std::map<std::string, std::string> fixtures_;
  mutable std::mutex mu_;
  std::vector<TranscriptEntry> transcript_;
};

}  // namespace mwploc::llm

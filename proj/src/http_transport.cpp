#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <cmath>

#include "mwploc/error.hpp"
#include "mwploc/llmclient.hpp"

namespace mwploc::llm {

namespace {

struct Url {
  std::string origin;  // scheme://host[:port]
  std::string target;  // path and query
};

Url split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw TransportError("endpoint is not an absolute URL: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

class HttplibTransport final : public Transport {
 public:
  HttpResponse post(const HttpRequest& req) override {
    const Url url = split_url(req.url);
    httplib::Client client(url.origin);
    const auto seconds = static_cast<time_t>(std::ceil(req.timeout_seconds));
    client.set_connection_timeout(seconds, 0);
    client.set_read_timeout(seconds, 0);
    client.set_write_timeout(seconds, 0);
    httplib::Headers headers;
    for (const auto& [k, v] : req.headers) headers.emplace(k, v);
    auto result = client.Post(url.target, headers, req.body, "application/json");
    if (!result) throw TransportError("request to " + url.origin + " failed: " + httplib::to_string(result.error()));
    return HttpResponse{result->status, result->body};
  }
};

}  // namespace

std::unique_ptr<Transport> make_http_transport() { return std::make_unique<HttplibTransport>(); }

}  // namespace mwploc::llm

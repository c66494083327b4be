#include "llmrs/http_json.hpp"

#include <thread>

#include "httplib.h"
#include "llmrs/error.hpp"

namespace llmrs {
namespace {

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

ParsedUrl split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos || url.compare(0, scheme, "http") != 0) {
    throw provider_error("endpoint must be an http:// URL: '" + url + "'");
  }
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

}  // namespace

nlohmann::json post_json_with_retry(const HttpEndpointOptions& options, const nlohmann::json& body) {
  const auto [origin, path] = split_url(options.url);
  const std::string payload = body.dump();
  std::string last_error;
  auto backoff = options.backoff;
  for (int attempt = 0; attempt <= options.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    httplib::Client client(origin);
    client.set_connection_timeout(options.timeout);
    client.set_read_timeout(options.timeout);
    auto res = client.Post(path, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw provider_error(options.url + " answered HTTP " + std::to_string(res->status));
    }
    auto parsed = nlohmann::json::parse(res->body, nullptr, false);
    if (parsed.is_discarded()) throw provider_error(options.url + " returned invalid JSON");
    return parsed;
  }
  throw provider_error(options.url + " failed after " + std::to_string(options.retries + 1) +
                       " attempts: " + last_error);
}

}  // namespace llmrs

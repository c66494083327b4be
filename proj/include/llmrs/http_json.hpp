#pragma once

#include <chrono>
#include <string>

#include "json.hpp"

namespace llmrs {

struct HttpEndpointOptions {
  std::string url;                 // http://host[:port]/path
  std::size_t batch_size = 32;
  int retries = 3;                 // extra attempts after the first
  std::chrono::milliseconds backoff{100};  // doubled after every failed attempt
  std::chrono::seconds timeout{30};
  std::size_t max_concurrency = 4; // batches in flight
};

/// POSTs `body` and returns the parsed response. Transport errors and 5xx
/// responses are retried; anything else throws a provider error immediately.
nlohmann::json post_json_with_retry(const HttpEndpointOptions& options, const nlohmann::json& body);

}  // namespace llmrs

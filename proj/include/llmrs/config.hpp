#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "llmrs/http_json.hpp"

namespace llmrs {

enum class ProviderKind { kFile, kHttp, kFallback };

std::optional<ProviderKind> parse_provider_kind(std::string_view s);
std::string_view to_string(ProviderKind kind);

// Resolved engine settings. Precedence when loading: command-line flags >
// environment (LLMRS_EMBED_ENDPOINT, LLMRS_SENTIMENT_ENDPOINT, LLMRS_SEED) >
// config file > the defaults below.
struct EngineConfig {
  std::filesystem::path store_dir;
  ProviderKind embed_provider = ProviderKind::kFallback;
  ProviderKind sentiment_provider = ProviderKind::kFallback;
  std::string embed_endpoint;
  std::string sentiment_endpoint;
  std::size_t embed_dim = 256;  // fallback provider only
  std::uint64_t seed = 42;
  std::size_t k_clusters = 5;
  std::size_t preselect_m = 50;
  bool display_x100 = true;
  std::size_t http_batch_size = 32;
  int http_retries = 3;

  /// Throws a provider error when the chosen backends lack settings and a
  /// validation error for out-of-range values.
  void validate() const;

  HttpEndpointOptions embed_http() const;
  HttpEndpointOptions sentiment_http() const;
};

/// Flat `key = value` file; '#' starts a comment. Unknown keys and
/// unparseable values are validation errors naming the line.
void apply_config_file(EngineConfig& config, const std::filesystem::path& path);

using EnvLookup = std::function<const char*(const char*)>;
void apply_environment(EngineConfig& config, const EnvLookup& getenv);

}  // namespace llmrs

#include "llmrs/config.hpp"

#include <charconv>
#include <fstream>

#include "llmrs/error.hpp"

namespace llmrs {

std::optional<ProviderKind> parse_provider_kind(std::string_view s) {
  if (s == "file") return ProviderKind::kFile;
  if (s == "http") return ProviderKind::kHttp;
  if (s == "fallback") return ProviderKind::kFallback;
  return std::nullopt;
}

std::string_view to_string(ProviderKind kind) {
  switch (kind) {
    case ProviderKind::kFile: return "file";
    case ProviderKind::kHttp: return "http";
    case ProviderKind::kFallback: return "fallback";
  }
  return "?";
}

void EngineConfig::validate() const {
  if (k_clusters < 2) throw validation_error("k_clusters must be >= 2");
  if (preselect_m < 1) throw validation_error("preselect_m must be >= 1");
  if (embed_provider == ProviderKind::kHttp && embed_endpoint.empty()) {
    throw provider_error("embed provider 'http' needs LLMRS_EMBED_ENDPOINT or embed_endpoint");
  }
  if (sentiment_provider == ProviderKind::kHttp && sentiment_endpoint.empty()) {
    throw provider_error("sentiment provider 'http' needs LLMRS_SENTIMENT_ENDPOINT or sentiment_endpoint");
  }
  if (embed_provider == ProviderKind::kFallback && embed_dim < 8) throw provider_error("embed_dim must be >= 8");
}

HttpEndpointOptions EngineConfig::embed_http() const {
  HttpEndpointOptions o;
  o.url = embed_endpoint;
  o.batch_size = http_batch_size;
  o.retries = http_retries;
  return o;
}

HttpEndpointOptions EngineConfig::sentiment_http() const {
  HttpEndpointOptions o = embed_http();
  o.url = sentiment_endpoint;
  return o;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
bool parse_number(const std::string& s, T& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_bool(const std::string& s, bool& out) {
  if (s == "true" || s == "1" || s == "on") return out = true, true;
  if (s == "false" || s == "0" || s == "off") return out = false, true;
  return false;
}

// Returns false when the value does not parse; throws for unknown keys.
bool set_key(EngineConfig& c, const std::string& key, const std::string& value) {
  if (key == "embed_provider" || key == "sentiment_provider") {
    auto kind = parse_provider_kind(value);
    if (!kind) return false;
    (key == "embed_provider" ? c.embed_provider : c.sentiment_provider) = *kind;
    return true;
  }
  if (key == "embed_endpoint") return c.embed_endpoint = value, true;
  if (key == "sentiment_endpoint") return c.sentiment_endpoint = value, true;
  if (key == "embed_dim") return parse_number(value, c.embed_dim);
  if (key == "seed") return parse_number(value, c.seed);
  if (key == "k_clusters") return parse_number(value, c.k_clusters);
  if (key == "preselect_m") return parse_number(value, c.preselect_m);
  if (key == "display_x100") return parse_bool(value, c.display_x100);
  if (key == "http_batch_size") return parse_number(value, c.http_batch_size);
  if (key == "http_retries") return parse_number(value, c.http_retries);
  throw validation_error("unknown config key '" + key + "'");
}

}  // namespace

void apply_config_file(EngineConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config file " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) throw validation_error(where + ": expected key = value");
    const std::string key = trim(std::string_view(content).substr(0, eq));
    const std::string value = trim(std::string_view(content).substr(eq + 1));
    try {
      if (!set_key(config, key, value)) throw validation_error("bad value '" + value + "' for " + key);
    } catch (const Error& e) {
      throw validation_error(where + ": " + e.what());
    }
  }
}

void apply_environment(EngineConfig& config, const EnvLookup& getenv) {
  if (const char* v = getenv("LLMRS_EMBED_ENDPOINT"); v && *v) config.embed_endpoint = v;
  if (const char* v = getenv("LLMRS_SENTIMENT_ENDPOINT"); v && *v) config.sentiment_endpoint = v;
  if (const char* v = getenv("LLMRS_SEED"); v && *v) {
    if (!parse_number(std::string(v), config.seed)) throw validation_error("LLMRS_SEED is not an integer");
  }
}

}  // namespace llmrs

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "llmrs/catalog.hpp"
#include "llmrs/http_json.hpp"

namespace llmrs {

struct EmbeddingVector {
  std::vector<double> values;

  std::size_t dim() const { return values.size(); }
  operator std::span<const double>() const { return values; }
  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;
};

/// (a . b) / (|a| |b|), clamped to [-1, 1]. Throws a validation error on a
/// dimension mismatch or a zero vector.
double cosine(std::span<const double> a, std::span<const double> b);

// Dense, immutable-after-load store of product embeddings.
class EmbeddingIndex {
 public:
  EmbeddingIndex(std::size_t dim, std::string provider) : dim_(dim), provider_(std::move(provider)) {}

  /// Throws on dimension mismatch, duplicate id, non-finite or all-zero vectors.
  void add(std::string id, std::span<const double> values);

  std::size_t dim() const { return dim_; }
  const std::string& provider() const { return provider_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }

  const std::string& id(std::size_t row) const { return ids_[row]; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * dim_, dim_}; }
  std::span<const double> data() const { return data_; }
  std::span<const double> norms() const { return norms_; }
  std::optional<std::uint32_t> find(std::string_view id) const;

 private:
  std::size_t dim_;
  std::string provider_;
  std::vector<std::string> ids_;
  std::vector<double> data_;
  std::vector<double> norms_;
  std::unordered_map<std::string, std::uint32_t> rows_;
};

struct Neighbor {
  std::uint32_t row = 0;
  std::string product_id;
  double similarity = 0.0;
};

struct TopKOptions {
  bool parallel = true;  // false uses the serial reference scan
};

/// The k most cosine-similar entries, similarity descending, ties by product
/// id ascending. When `subset` is given only those rows are scanned.
std::vector<Neighbor> top_k_similar(std::span<const double> query, const EmbeddingIndex& index, std::size_t k,
                                    std::optional<std::span<const std::uint32_t>> subset = std::nullopt,
                                    const TopKOptions& options = {});

// Text -> vector model. Implementations must be callable from several threads.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::string name() const = 0;
  virtual std::vector<EmbeddingVector> embed_batch(std::span<const std::string_view> texts) const = 0;

  EmbeddingVector embed(std::string_view text) const { return embed_batch({&text, 1}).front(); }
};

inline constexpr std::string_view kFallbackProviderName = "fallback-hash-v1";
// Mixed into the FNV-1a offset basis of the fallback hasher.
inline constexpr std::uint64_t kFallbackHashSeed = 0x6c6c6d7273ULL;

/// Signed feature hashing of the tokenized text: 64-bit FNV-1a (offset basis
/// xor kFallbackHashSeed); bucket = hash % dim, sign = -1 when bit 63 is set.
/// Counts are L2-normalized; a text with no tokens (or cancelling to zero)
/// maps to the unit vector e0. Requires dim >= 8.
EmbeddingVector fallback_embed(std::string_view text, std::size_t dim);

class FallbackEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit FallbackEmbeddingProvider(std::size_t dim);
  std::string name() const override { return std::string(kFallbackProviderName); }
  std::size_t dim() const { return dim_; }
  std::vector<EmbeddingVector> embed_batch(std::span<const std::string_view> texts) const override;

 private:
  std::size_t dim_;
};

/// POST {"texts": [...]} -> {"vectors": [[...], ...]}.
class HttpEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit HttpEmbeddingProvider(HttpEndpointOptions options) : options_(std::move(options)) {}
  std::string name() const override { return "http"; }
  std::vector<EmbeddingVector> embed_batch(std::span<const std::string_view> texts) const override;

 private:
  HttpEndpointOptions options_;
};

EmbeddingIndex load_embedding_file(const std::filesystem::path& path);
void write_embedding_file(const std::filesystem::path& path, const EmbeddingIndex& index);

/// Embeds every product description and writes the interchange file. On a
/// provider failure no file is left behind.
EmbeddingIndex precompute_embeddings(const Catalog& catalog, const EmbeddingProvider& provider,
                                     const std::filesystem::path& path);

}  // namespace llmrs

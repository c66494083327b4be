#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "llmrs/catalog.hpp"
#include "llmrs/config.hpp"
#include "llmrs/embed.hpp"
#include "llmrs/kmeans.hpp"
#include "llmrs/rank.hpp"
#include "llmrs/sentiment.hpp"

namespace llmrs {

// File names inside a store directory.
namespace store_files {
inline constexpr const char* kProducts = "products.jsonl";
inline constexpr const char* kReviews = "reviews.jsonl";
inline constexpr const char* kManifest = "manifest.json";
inline constexpr const char* kEmbeddings = "embeddings.jsonl";
inline constexpr const char* kSentiments = "sentiments.jsonl";
inline constexpr const char* kTfidf = "tfidf.json";
inline constexpr const char* kClusters = "clusters.json";
inline constexpr const char* kConfig = "llmrs.conf";
}  // namespace store_files

struct Store {
  Catalog catalog;
  ReviewStore reviews;
  nlohmann::ordered_json manifest;

  bool built() const { return manifest.contains("build"); }
};

nlohmann::ordered_json product_to_json(const Product& p);
nlohmann::ordered_json review_to_json(const Review& r);

/// Writes products.jsonl, reviews.jsonl and manifest.json.
void save_store(const std::filesystem::path& dir, const Store& store);

/// Persists a fresh ingest; the manifest records counts and source names.
Store make_store(IngestResult ingested, const std::string& metadata_source, const std::string& reviews_source);

/// Throws a missing-store error when the directory or manifest is absent.
Store load_store(const std::filesystem::path& dir);

struct BuildOptions {
  std::size_t k = 5;
  std::uint64_t seed = 42;
  std::size_t max_iters = 100;
  double tol = 1e-4;
};

struct BuildReport {
  std::size_t reviews = 0;
  std::size_t clustered = 0;
  std::size_t unclustered = 0;  // empty TF-IDF rows, given the median rating
  std::size_t vocabulary = 0;
  std::size_t iterations = 0;
  double final_sse = 0.0;
  std::vector<ClusterStats> clusters;
};

struct BuildArtifacts {
  TfidfModel tfidf;
  ClusterModel clusters;
  std::vector<std::string> clustered_review_ids;
  BuildReport report;
};

/// Scores reviews, fits TF-IDF, clusters, rates clusters and aggregates
/// per-product sentiment, updating `store` in place.
BuildArtifacts build(Store& store, const SentimentProvider& sentiments, const BuildOptions& options);

/// build() over a store directory: reads sentiments.jsonl and writes every
/// derived artifact back into the directory.
BuildReport build_store(const std::filesystem::path& dir, const BuildOptions& options);

struct CrosstabReport {
  // counts[label][rating - 1]; label 0 = positive, 1 = negative
  std::size_t counts[2][5] = {};
  std::size_t total() const;
};

/// Counts (label, star rating) pairs over reviews that carry a sentiment.
CrosstabReport crosstab(const ReviewStore& reviews);

/// Provider used to embed queries against an index: the hashing fallback for
/// fallback-built indexes, otherwise the configured HTTP endpoint.
std::unique_ptr<EmbeddingProvider> query_embedder(const EngineConfig& config, const EmbeddingIndex& index);

// Immutable, query-ready view of a built store.
class Engine {
 public:
  static std::shared_ptr<const Engine> load(const EngineConfig& config);

  const Catalog& catalog() const { return store_.catalog; }
  const ReviewStore& reviews() const { return store_.reviews; }
  const EmbeddingIndex& index() const { return index_; }
  const EngineConfig& config() const { return config_; }

  QueryResult query(const QueryRequest& request) const;
  ComparisonResult compare(const QueryRequest& request) const;

 private:
  Engine(EngineConfig config, Store store, EmbeddingIndex index, std::unique_ptr<EmbeddingProvider> embedder);

  EngineConfig config_;
  Store store_;
  EmbeddingIndex index_;
  std::unique_ptr<EmbeddingProvider> embedder_;
};

}  // namespace llmrs

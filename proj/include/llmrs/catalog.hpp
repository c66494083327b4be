#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace llmrs {

// Dataset currency units. Display code may scale by 100; computations never do.
using Money = double;

struct SentimentScore {
  double pos = 0.5;
  double neg = 0.5;

  friend bool operator==(const SentimentScore&, const SentimentScore&) = default;
};

// Per-product sums over scored reviews.
struct ProductSentimentAggregate {
  double positive = 0.0;  // sum of pos
  double negative = 0.0;  // sum of neg
  std::size_t count = 0;  // number of scored reviews, >= 1 when present
};

struct Product {
  std::string id;
  std::string description;
  std::string category;
  std::string title;
  std::string brand;
  Money price = 0.0;
  Money license_fee = 0.0;
  Money implementation_cost = 0.0;
  Money maintenance_cost = 0.0;  // monthly

  // Filled in by the build step.
  std::optional<ProductSentimentAggregate> sentiment;
  std::optional<double> avg_rating;
  std::optional<int> consistent_rating;
};

struct Review {
  std::string review_id;  // "<product_id>#<ordinal>"
  std::string product_id;
  std::string text;
  std::string summary;
  int rating = 0;  // 1..5
  bool verified = false;

  // Filled in by the build step.
  std::optional<SentimentScore> sentiment;
  std::optional<int> cluster;          // absent for reviews left out of clustering
  std::optional<int> cluster_rating;
};

struct Catalog {
  std::vector<Product> products;
  std::unordered_map<std::string, std::size_t> by_id;

  const Product* find(std::string_view id) const;
  void reindex();
};

struct ReviewStore {
  std::vector<Review> reviews;

  // review positions per product id, in encounter order
  std::unordered_map<std::string, std::vector<std::size_t>> by_product() const;
};

struct IngestCounts {
  std::size_t metadata_records = 0;
  std::size_t metadata_malformed = 0;
  std::size_t duplicate_products = 0;
  std::size_t price_excluded = 0;
  std::size_t review_records = 0;
  std::size_t reviews_linked = 0;
  std::size_t reviews_dropped = 0;  // product id not in the catalog
  std::size_t reviews_malformed = 0;
};

struct IngestResult {
  Catalog catalog;
  ReviewStore reviews;
  IngestCounts counts;
};

/// Parses dataset price strings such as "$1,299.99". Returns nullopt for
/// empty, negative or otherwise unparseable input.
std::optional<Money> parse_price(std::string_view raw);

/// Reads metadata and review JSON Lines streams. Products are deduplicated
/// (first record wins) and those without a parseable price are excluded;
/// reviews whose product is not in the catalog are dropped. Costs are
/// simulated before returning.
IngestResult ingest(std::istream& metadata, std::istream& reviews);
IngestResult ingest_files(const std::filesystem::path& metadata, const std::filesystem::path& reviews);

/// license = 0.8 * min price in category, implementation = 0.5 * price,
/// maintenance = 0.01 * price.
void simulate_costs(Catalog& catalog);

struct ColumnStats {
  std::size_t count = 0;
  double mean = 0, std = 0, min = 0, q25 = 0, q50 = 0, q75 = 0, max = 0;
};

struct CatalogStats {
  static constexpr std::size_t kColumns = 7;
  static constexpr std::string_view kColumnNames[kColumns] = {
      "Price", "License fee", "Implementation cost", "Maintenance cost",
      "Positive score", "Negative score", "Number of reviews"};
  ColumnStats columns[kColumns];
};

// Sample statistics over one column: n-1 std, linearly interpolated quartiles.
ColumnStats column_stats(std::vector<double> values);

/// Statistics over products that carry a sentiment aggregate. Throws a
/// validation error when there are none.
CatalogStats descriptive_stats(const Catalog& catalog);

}  // namespace llmrs

#pragma once

// Shared test fixtures: temp directories, synthetic datasets, random vectors.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "llmrs/embed.hpp"
#include "llmrs/engine.hpp"
#include "llmrs/sentiment.hpp"

namespace llmrs::testing {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    std::random_device rd;
    path_ = fs::temp_directory_path() /
            ("llmrs-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(dim);
  for (auto& x : v) x = normal(rng);
  return v;
}

inline SparseVector dense_to_sparse(const std::vector<double>& v) {
  SparseVector s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0) {
      s.indices.push_back(static_cast<std::uint32_t>(i));
      s.values.push_back(v[i]);
    }
  }
  return s;
}

// Ids of the two products the end-to-end fixture is built around.
inline constexpr const char* kManyReviewsId = "SW01";  // 100 reviews, mostly positive text, mixed stars
inline constexpr const char* kOneReviewId = "SW02";    // a single 5-star review

/// Writes metadata.jsonl and reviews.jsonl for a 20-product software catalog
/// (plus one duplicate, one price-less and one malformed metadata record).
inline void write_synthetic_dataset(const fs::path& dir) {
  using nlohmann::ordered_json;
  const std::vector<std::string> topics = {
      "HR program for managing employee records on Windows",
      "staff file HR solution for employee records and payroll",
      "accounting ledger and invoicing for small business",
      "tax preparation software for personal returns",
      "photo editing suite with layers and filters",
      "antivirus protection and firewall for Windows",
      "language learning course for Spanish beginners",
      "typing tutor for kids with games",
      "resume writer with templates and audit tools",
      "project management with gantt charts and timesheets",
      "video editing studio for home movies",
      "backup and disk cloning utility",
      "organizer for contacts calendar and tasks",
      "music notation and composition tool",
      "math tutoring for middle school students",
      "web design editor with html templates",
      "database manager for inventory records",
      "office suite with word processor and spreadsheet",
      "flight simulator with realistic cockpits",
      "employee scheduling and shift planner for managers"};
  const std::vector<std::vector<std::string>> categories = {
      {"Software", "Business & Office"}, {"Software", "Education & Reference"}, {"Software", "Utilities"}};
  const double prices[] = {39.99, 217.80, 12.50, 29.99, 79.00, 24.95, 45.00, 9.99,  39.95, 129.90,
                           59.99, 19.99,  0.00,  99.00, 15.00, 49.50, 74.25, 129.90, 34.99, 64.00};

  std::ofstream meta(dir / "metadata.jsonl");
  for (int i = 0; i < 20; ++i) {
    char id[8];
    std::snprintf(id, sizeof id, "SW%02d", i + 1);
    char price[32];
    std::snprintf(price, sizeof price, "$%.2f", prices[i]);
    ordered_json rec = {{"asin", id},
                        {"title", topics[i].substr(0, 20)},
                        {"description", ordered_json::array({topics[i], "Runs on Windows and Mac."})},
                        {"category", categories[i % 3]},
                        {"price", price},
                        {"brand", "Acme"}};
    meta << rec.dump() << '\n';
    if (i == 4) meta << ordered_json{{"asin", "SW05"}, {"description", "duplicate record"}, {"price", "$1.00"}}.dump() << '\n';
  }
  meta << ordered_json{{"asin", "NOPRICE"}, {"description", "no price here"}, {"price", ""}}.dump() << '\n';
  meta << "{not json\n";

  const std::vector<std::string> positive = {
      "great tool works perfectly and easy to use",      "excellent value, reliable and fast",
      "love it, intuitive interface and helpful support", "solid product, recommend it to anyone",
      "perfect for our office, simple and powerful"};
  const std::vector<std::string> negative = {
      "crashes constantly, slow and buggy",   "terrible support, waste of money",
      "poor design and confusing menus",      "installer failed, want a refund",
      "awful experience, broken after update"};

  std::ofstream reviews(dir / "reviews.jsonl");
  auto review = [&](const std::string& asin, const std::string& text, int stars) {
    ordered_json rec = {{"asin", asin},     {"reviewText", text},       {"overall", stars},
                        {"summary", "ok"}, {"verified", stars % 2 == 0}, {"reviewerName", "someone"}};
    reviews << rec.dump() << '\n';
  };
  // 100 reviews: 80 positive texts, 20 negative, star ratings that often disagree.
  for (int i = 0; i < 100; ++i) {
    if (i % 5 == 4) review(kManyReviewsId, negative[i % negative.size()], 2 + (i % 2) * 3);
    else review(kManyReviewsId, positive[i % positive.size()], 1 + (i % 4));
  }
  review(kOneReviewId, "good", 5);
  std::mt19937_64 rng(7);
  for (int p = 3; p <= 20; ++p) {
    char id[8];
    std::snprintf(id, sizeof id, "SW%02d", p);
    const int n = 1 + static_cast<int>(rng() % 6);
    for (int r = 0; r < n; ++r) {
      const bool pos = rng() % 3 != 0;
      const auto& pool = pos ? positive : negative;
      review(id, pool[rng() % pool.size()] + " for " + topics[p - 1].substr(0, topics[p - 1].find(' ')),
             pos ? 3 + static_cast<int>(rng() % 3) : 1 + static_cast<int>(rng() % 3));
    }
  }
  review("UNKNOWN", "review of a product that is not in the catalog", 3);
  reviews << "{broken\n";
}

/// ingest -> fallback embeddings -> lexicon sentiments -> build, inside `store`.
inline void build_hermetic_store(const fs::path& data_dir, const fs::path& store, std::size_t dim = 64,
                                 std::uint64_t seed = 42) {
  auto ingested = ingest_files(data_dir / "metadata.jsonl", data_dir / "reviews.jsonl");
  Store s = make_store(std::move(ingested), "metadata.jsonl", "reviews.jsonl");
  save_store(store, s);
  precompute_embeddings(s.catalog, FallbackEmbeddingProvider(dim), store / store_files::kEmbeddings);
  LexiconSentimentProvider lexicon;
  std::vector<ScoreRequest> requests;
  for (const auto& r : s.reviews.reviews) requests.push_back({r.review_id, r.text});
  auto scores = lexicon.score_batch(requests);
  std::vector<SentimentRow> rows;
  for (std::size_t i = 0; i < scores.size(); ++i) rows.push_back({s.reviews.reviews[i].review_id, scores[i]});
  write_sentiment_file(store / store_files::kSentiments, lexicon.name(), lexicon.normalized(), rows);
  build_store(store, {.k = 5, .seed = seed});
}

}  // namespace llmrs::testing

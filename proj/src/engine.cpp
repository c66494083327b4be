#include "llmrs/engine.hpp"

#include <fstream>

#include "atomic_file.hpp"
#include "llmrs/error.hpp"
#include "llmrs/text.hpp"

namespace llmrs {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {
constexpr std::string_view kStoreFormat = "llmrs-store";
constexpr int kStoreVersion = 1;

template <typename T>
std::optional<T> optional_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

Product product_from_json(const json& j) {
  Product p;
  p.id = j.at("id").get<std::string>();
  p.description = j.at("description").get<std::string>();
  p.category = j.at("category").get<std::string>();
  p.title = j.value("title", "");
  p.brand = j.value("brand", "");
  p.price = j.at("price").get<double>();
  p.license_fee = j.at("license_fee").get<double>();
  p.implementation_cost = j.at("implementation_cost").get<double>();
  p.maintenance_cost = j.at("maintenance_cost").get<double>();
  if (j.contains("num_reviews")) {
    p.sentiment = ProductSentimentAggregate{j.at("positive_score").get<double>(), j.at("negative_score").get<double>(),
                                            j.at("num_reviews").get<std::size_t>()};
  }
  p.avg_rating = optional_field<double>(j, "avg_rating");
  p.consistent_rating = optional_field<int>(j, "consistent_rating");
  return p;
}

Review review_from_json(const json& j) {
  Review r;
  r.review_id = j.at("review_id").get<std::string>();
  r.product_id = j.at("product_id").get<std::string>();
  r.text = j.at("text").get<std::string>();
  r.summary = j.value("summary", "");
  r.rating = j.at("rating").get<int>();
  r.verified = j.value("verified", false);
  if (j.contains("pos")) r.sentiment = SentimentScore{j.at("pos").get<double>(), j.at("neg").get<double>()};
  r.cluster = optional_field<int>(j, "cluster");
  r.cluster_rating = optional_field<int>(j, "cluster_rating");
  return r;
}

template <typename T, typename Parse>
std::vector<T> read_jsonl(const fs::path& path, Parse parse) {
  std::ifstream in(path);
  if (!in) throw missing_store_error("missing store file " + path.string());
  std::vector<T> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(parse(json::parse(line)));
    } catch (const json::exception& e) {
      throw validation_error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

template <typename T, typename ToJson>
void write_jsonl(const fs::path& path, const std::vector<T>& items, ToJson to_json) {
  detail::AtomicFile file(path);
  for (const auto& item : items) file.stream() << to_json(item).dump() << '\n';
  file.commit();
}

ordered_json counts_to_json(const IngestCounts& c) {
  return {{"metadata_records", c.metadata_records}, {"metadata_malformed", c.metadata_malformed},
          {"duplicate_products", c.duplicate_products}, {"price_excluded", c.price_excluded},
          {"review_records", c.review_records}, {"reviews_linked", c.reviews_linked},
          {"reviews_dropped", c.reviews_dropped}, {"reviews_malformed", c.reviews_malformed}};
}

}  // namespace

ordered_json product_to_json(const Product& p) {
  ordered_json j = {{"id", p.id},
                    {"description", p.description},
                    {"category", p.category},
                    {"title", p.title},
                    {"brand", p.brand},
                    {"price", p.price},
                    {"license_fee", p.license_fee},
                    {"implementation_cost", p.implementation_cost},
                    {"maintenance_cost", p.maintenance_cost}};
  if (p.sentiment) {
    j["positive_score"] = p.sentiment->positive;
    j["negative_score"] = p.sentiment->negative;
    j["num_reviews"] = p.sentiment->count;
  }
  if (p.avg_rating) j["avg_rating"] = *p.avg_rating;
  if (p.consistent_rating) j["consistent_rating"] = *p.consistent_rating;
  return j;
}

ordered_json review_to_json(const Review& r) {
  ordered_json j = {{"review_id", r.review_id}, {"product_id", r.product_id}, {"text", r.text},
                    {"summary", r.summary},     {"rating", r.rating},         {"verified", r.verified}};
  if (r.sentiment) {
    j["pos"] = r.sentiment->pos;
    j["neg"] = r.sentiment->neg;
  }
  if (r.cluster) j["cluster"] = *r.cluster;
  if (r.cluster_rating) j["cluster_rating"] = *r.cluster_rating;
  return j;
}

Store make_store(IngestResult ingested, const std::string& metadata_source, const std::string& reviews_source) {
  Store store{std::move(ingested.catalog), std::move(ingested.reviews), {}};
  store.manifest = {{"format", kStoreFormat},
                    {"version", kStoreVersion},
                    {"ingest",
                     {{"metadata_source", metadata_source},
                      {"reviews_source", reviews_source},
                      {"stopword_list_version", kStopwordListVersion},
                      {"products", store.catalog.products.size()},
                      {"reviews", store.reviews.reviews.size()},
                      {"counts", counts_to_json(ingested.counts)}}}};
  return store;
}

void save_store(const fs::path& dir, const Store& store) {
  fs::create_directories(dir);
  write_jsonl(dir / store_files::kProducts, store.catalog.products, product_to_json);
  write_jsonl(dir / store_files::kReviews, store.reviews.reviews, review_to_json);
  detail::AtomicFile manifest(dir / store_files::kManifest);
  manifest.stream() << store.manifest.dump(2) << '\n';
  manifest.commit();
}

Store load_store(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw missing_store_error("store directory not found: " + dir.string());
  std::ifstream in(dir / store_files::kManifest);
  if (!in) throw missing_store_error("store has no manifest: " + (dir / store_files::kManifest).string());
  Store store;
  store.manifest = ordered_json::parse(in, nullptr, false);
  if (store.manifest.is_discarded() || store.manifest.value("format", "") != kStoreFormat) {
    throw validation_error("not an llmrs store manifest: " + (dir / store_files::kManifest).string());
  }
  store.catalog.products = read_jsonl<Product>(dir / store_files::kProducts, product_from_json);
  store.catalog.reindex();
  if (store.catalog.by_id.size() != store.catalog.products.size()) {
    throw validation_error("duplicate product ids in " + (dir / store_files::kProducts).string());
  }
  store.reviews.reviews = read_jsonl<Review>(dir / store_files::kReviews, review_from_json);
  for (const auto& r : store.reviews.reviews) {
    if (!store.catalog.find(r.product_id)) {
      throw validation_error("review " + r.review_id + " refers to unknown product " + r.product_id);
    }
  }
  return store;
}

BuildArtifacts build(Store& store, const SentimentProvider& sentiments, const BuildOptions& options) {
  auto& reviews = store.reviews.reviews;

  std::vector<ScoreRequest> requests;
  requests.reserve(reviews.size());
  for (const auto& r : reviews) requests.push_back({r.review_id, r.text});
  const auto scores = sentiments.score_batch(requests);
  for (std::size_t i = 0; i < reviews.size(); ++i) reviews[i].sentiment = scores[i];

  std::vector<std::string> texts;
  texts.reserve(reviews.size());
  for (const auto& r : reviews) texts.push_back(r.text);
  auto tfidf = TfidfModel::fit(texts);
  auto rows = tfidf.transform_all(texts);

  std::vector<std::size_t> clustered;
  std::vector<SparseVector> points;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].empty()) continue;
    clustered.push_back(i);
    points.push_back(std::move(rows[i]));
  }
  auto model = kmeans(points, tfidf.size(),
                      {.k = options.k, .seed = options.seed, .max_iters = options.max_iters, .tol = options.tol});

  std::vector<SentimentLabel> labels;
  labels.reserve(clustered.size());
  for (std::size_t i : clustered) labels.push_back(label_review(*reviews[i].sentiment));
  auto stats = cluster_stats(model.assignments, labels, options.k);

  const int fallback_rating = median_cluster_rating(options.k);
  for (auto& r : reviews) {
    r.cluster.reset();
    r.cluster_rating = fallback_rating;
  }
  std::vector<std::string> clustered_ids;
  clustered_ids.reserve(clustered.size());
  for (std::size_t j = 0; j < clustered.size(); ++j) {
    auto& r = reviews[clustered[j]];
    r.cluster = model.assignments[j];
    r.cluster_rating = stats[static_cast<std::size_t>(model.assignments[j])].rating;
    clustered_ids.push_back(r.review_id);
  }

  const auto grouped = store.reviews.by_product();
  for (auto& p : store.catalog.products) {
    p.sentiment.reset();
    p.avg_rating.reset();
    p.consistent_rating.reset();
    auto it = grouped.find(p.id);
    if (it == grouped.end()) continue;
    std::vector<SentimentScore> product_scores;
    std::vector<int> stars, cluster_ratings;
    for (std::size_t i : it->second) {
      product_scores.push_back(*reviews[i].sentiment);
      stars.push_back(reviews[i].rating);
      cluster_ratings.push_back(*reviews[i].cluster_rating);
    }
    p.sentiment = aggregate(product_scores);
    p.avg_rating = baseline_avg_rating(stars);
    p.consistent_rating = consistent_rating(cluster_ratings);
  }

  BuildReport report;
  report.reviews = reviews.size();
  report.clustered = clustered.size();
  report.unclustered = reviews.size() - clustered.size();
  report.vocabulary = tfidf.size();
  report.iterations = model.iterations_run;
  report.final_sse = model.final_sse;
  report.clusters = stats;

  ordered_json per_cluster = ordered_json::array();
  for (const auto& s : stats) per_cluster.push_back({{"x_p", s.positive}, {"x_n", s.negative}, {"Y", s.rate}, {"rating", s.rating}});
  store.manifest["build"] = {{"k", options.k},
                             {"seed", options.seed},
                             {"sentiment_provider", sentiments.name()},
                             {"vocabulary", report.vocabulary},
                             {"clustered_reviews", report.clustered},
                             {"unclustered_reviews", report.unclustered},
                             {"iterations_run", report.iterations},
                             {"final_sse", report.final_sse},
                             {"clusters", std::move(per_cluster)}};
  return {std::move(tfidf), std::move(model), std::move(clustered_ids), std::move(report)};
}

BuildReport build_store(const fs::path& dir, const BuildOptions& options) {
  Store store = load_store(dir);
  const auto sentiment_path = dir / store_files::kSentiments;
  if (!fs::exists(sentiment_path)) {
    throw missing_store_error("store has no " + std::string(store_files::kSentiments) +
                              "; run `llmrs precompute sentiments` first");
  }
  FileSentimentProvider sentiments(load_sentiment_file(sentiment_path));
  auto artifacts = build(store, sentiments, options);
  artifacts.tfidf.save(dir / store_files::kTfidf);
  save_clusters(dir / store_files::kClusters, artifacts.clusters, artifacts.report.clusters,
                artifacts.clustered_review_ids);
  save_store(dir, store);
  return artifacts.report;
}

std::size_t CrosstabReport::total() const {
  std::size_t t = 0;
  for (const auto& row : counts)
    for (std::size_t c : row) t += c;
  return t;
}

CrosstabReport crosstab(const ReviewStore& reviews) {
  CrosstabReport report;
  for (const auto& r : reviews.reviews) {
    if (!r.sentiment || r.rating < 1 || r.rating > 5) continue;
    const int label = label_review(*r.sentiment) == SentimentLabel::kPositive ? 0 : 1;
    ++report.counts[label][r.rating - 1];
  }
  return report;
}

namespace {

// Rejects query vectors whose dimension disagrees with the index.
class DimCheckedEmbedder final : public EmbeddingProvider {
 public:
  DimCheckedEmbedder(std::unique_ptr<EmbeddingProvider> inner, std::size_t dim) : inner_(std::move(inner)), dim_(dim) {}
  std::string name() const override { return inner_->name(); }
  std::vector<EmbeddingVector> embed_batch(std::span<const std::string_view> texts) const override {
    auto out = inner_->embed_batch(texts);
    for (const auto& v : out) {
      if (v.dim() != dim_) {
        throw provider_error(inner_->name() + " returned dim " + std::to_string(v.dim()) + ", index dim is " +
                             std::to_string(dim_));
      }
    }
    return out;
  }

 private:
  std::unique_ptr<EmbeddingProvider> inner_;
  std::size_t dim_;
};

}  // namespace

std::unique_ptr<EmbeddingProvider> query_embedder(const EngineConfig& config, const EmbeddingIndex& index) {
  std::unique_ptr<EmbeddingProvider> inner;
  if (index.provider() == kFallbackProviderName) {
    inner = std::make_unique<FallbackEmbeddingProvider>(index.dim());
  } else if (!config.embed_endpoint.empty()) {
    inner = std::make_unique<HttpEmbeddingProvider>(config.embed_http());
  } else {
    throw provider_error("embeddings were produced by '" + index.provider() +
                         "'; queries need LLMRS_EMBED_ENDPOINT pointing at the same model");
  }
  return std::make_unique<DimCheckedEmbedder>(std::move(inner), index.dim());
}

Engine::Engine(EngineConfig config, Store store, EmbeddingIndex index, std::unique_ptr<EmbeddingProvider> embedder)
    : config_(std::move(config)), store_(std::move(store)), index_(std::move(index)), embedder_(std::move(embedder)) {}

std::shared_ptr<const Engine> Engine::load(const EngineConfig& config) {
  Store store = load_store(config.store_dir);
  if (!store.built()) throw missing_store_error("store is not built; run `llmrs build` first");
  auto index = load_embedding_file(config.store_dir / store_files::kEmbeddings);
  for (const auto& p : store.catalog.products) {
    if (!index.find(p.id)) throw validation_error("product '" + p.id + "' has no embedding in the store");
  }
  auto embedder = query_embedder(config, index);
  return std::shared_ptr<const Engine>(new Engine(config, std::move(store), std::move(index), std::move(embedder)));
}

QueryResult Engine::query(const QueryRequest& request) const {
  return llmrs::query(request, store_.catalog, index_, *embedder_);
}

ComparisonResult Engine::compare(const QueryRequest& request) const {
  return llmrs::compare(request, store_.catalog, index_, *embedder_);
}

}  // namespace llmrs

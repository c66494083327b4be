#include "llmrs/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "llmrs/error.hpp"
#include "llmrs/text.hpp"

namespace llmrs {

using nlohmann::json;

double SparseVector::squared_norm() const {
  double sum = 0.0;
  for (double v : values) sum += v * v;
  return sum;
}

TfidfModel TfidfModel::fit(std::span<const std::string> corpus, const TfidfOptions& options) {
  if (corpus.empty()) throw validation_error("fit_tfidf: empty corpus");

  std::unordered_map<std::string, std::size_t> df;
  for (const auto& doc : corpus) {
    auto tokens = tokenize(doc);
    std::unordered_set<std::string> unique(tokens.begin(), tokens.end());
    for (auto& t : unique) ++df[t];
  }

  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [term, count] : df) {
    if (count >= options.min_df) kept.emplace_back(term, count);
  }
  if (kept.size() > options.max_vocabulary) {
    // highest document frequency first, lexicographic among equals
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    kept.resize(options.max_vocabulary);
  }
  std::sort(kept.begin(), kept.end());

  TfidfModel model;
  model.num_docs_ = corpus.size();
  model.min_df_ = options.min_df;
  model.idf_.reserve(kept.size());
  const double n = static_cast<double>(corpus.size());
  for (std::uint32_t i = 0; i < kept.size(); ++i) {
    model.vocabulary_.emplace(kept[i].first, i);
    model.idf_.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(kept[i].second))) + 1.0);
  }
  return model;
}

SparseVector TfidfModel::transform(std::string_view doc) const {
  std::map<std::uint32_t, double> counts;
  for (const auto& token : tokenize(doc)) {
    auto it = vocabulary_.find(token);
    if (it != vocabulary_.end()) counts[it->second] += 1.0;
  }
  SparseVector out;
  out.indices.reserve(counts.size());
  out.values.reserve(counts.size());
  double sq = 0.0;
  for (auto [index, count] : counts) {
    const double w = count * idf_[index];
    out.indices.push_back(index);
    out.values.push_back(w);
    sq += w * w;
  }
  if (sq > 0.0) {
    const double norm = std::sqrt(sq);
    for (double& v : out.values) v /= norm;
  }
  return out;
}

std::vector<SparseVector> TfidfModel::transform_all(std::span<const std::string> docs) const {
  std::vector<SparseVector> rows(docs.size());
  const auto n = static_cast<std::int64_t>(docs.size());
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t i = 0; i < n; ++i) rows[i] = transform(docs[i]);
  return rows;
}

void TfidfModel::save(const std::filesystem::path& path) const {
  json terms = json::array();
  for (const auto& [term, index] : vocabulary_) {
    terms.push_back({{"term", term}, {"index", index}, {"idf", idf_[index]}});
  }
  json doc = {{"terms", std::move(terms)},
              {"num_docs", num_docs_},
              {"min_df", min_df_},
              {"stopword_list_version", kStopwordListVersion}};
  std::ofstream out(path);
  if (!out) throw io_error("cannot write " + path.string());
  out << doc.dump() << '\n';
}

TfidfModel TfidfModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw missing_store_error("missing TF-IDF model " + path.string());
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw validation_error(path.string() + ": not a JSON object");
  try {
    if (doc.at("stopword_list_version").get<std::string>() != kStopwordListVersion) {
      throw validation_error(path.string() + ": stopword list version mismatch");
    }
    TfidfModel model;
    model.num_docs_ = doc.at("num_docs").get<std::size_t>();
    model.min_df_ = doc.at("min_df").get<std::size_t>();
    const auto& terms = doc.at("terms");
    model.idf_.assign(terms.size(), 0.0);
    std::vector<bool> used(terms.size(), false);
    for (const auto& t : terms) {
      const auto index = t.at("index").get<std::uint32_t>();
      if (index >= terms.size() || used[index]) throw validation_error(path.string() + ": bad term index");
      used[index] = true;
      model.idf_[index] = t.at("idf").get<double>();
      model.vocabulary_.emplace(t.at("term").get<std::string>(), index);
    }
    if (model.vocabulary_.size() != terms.size()) throw validation_error(path.string() + ": duplicate term");
    return model;
  } catch (const json::exception& e) {
    throw validation_error(path.string() + ": " + e.what());
  }
}

}  // namespace llmrs

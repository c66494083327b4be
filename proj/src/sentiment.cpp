#include "llmrs/sentiment.hpp"

#include <cmath>
#include <fstream>
#include <future>

#include "atomic_file.hpp"
#include "json.hpp"
#include "llmrs/error.hpp"
#include "llmrs/text.hpp"

namespace llmrs {

using nlohmann::json;

namespace {
constexpr std::string_view kFormat = "llmrs-sentiments";
constexpr int kVersion = 1;
constexpr double kNormalizedTolerance = 1e-3;
}  // namespace

SentimentScore lexicon_score(std::string_view text) {
  std::size_t positive = 0, negative = 0;
  for (const auto& token : tokenize(text)) {
    if (is_positive_word(token)) ++positive;
    else if (is_negative_word(token)) ++negative;
  }
  if (positive + negative == 0) return {0.5, 0.5};
  const double total = static_cast<double>(positive + negative);
  return {static_cast<double>(positive) / total, static_cast<double>(negative) / total};
}

std::vector<SentimentScore> LexiconSentimentProvider::score_batch(std::span<const ScoreRequest> requests) const {
  std::vector<SentimentScore> out(requests.size());
  const auto n = static_cast<std::int64_t>(requests.size());
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t i = 0; i < n; ++i) out[i] = lexicon_score(requests[i].text);
  return out;
}

std::vector<SentimentScore> FileSentimentProvider::score_batch(std::span<const ScoreRequest> requests) const {
  std::vector<SentimentScore> out;
  out.reserve(requests.size());
  std::vector<std::string_view> missing;
  for (const auto& r : requests) {
    auto it = file_.scores.find(r.review_id);
    if (it == file_.scores.end()) {
      missing.push_back(r.review_id);
      out.push_back({});
    } else {
      out.push_back(it->second);
    }
  }
  if (!missing.empty()) {
    std::string msg = "sentiment file has no score for " + std::to_string(missing.size()) + " review id(s):";
    for (std::size_t i = 0; i < missing.size() && i < 20; ++i) msg += " " + std::string(missing[i]);
    if (missing.size() > 20) msg += " ...";
    throw validation_error(msg);
  }
  return out;
}

std::vector<SentimentScore> HttpSentimentProvider::score_batch(std::span<const ScoreRequest> requests) const {
  const std::size_t batch = std::max<std::size_t>(1, options_.batch_size);
  auto run_batch = [this](std::span<const ScoreRequest> chunk) {
    json texts = json::array();
    for (const auto& r : chunk) texts.push_back(std::string(r.text));
    json response = post_json_with_retry(options_, {{"texts", std::move(texts)}});
    auto scores = response.find("scores");
    if (scores == response.end() || !scores->is_array() || scores->size() != chunk.size()) {
      throw provider_error(options_.url + ": response 'scores' missing or wrong length");
    }
    std::vector<SentimentScore> out;
    out.reserve(chunk.size());
    for (const auto& s : *scores) {
      if (!s.is_object() || !s.contains("pos") || !s.contains("neg") || !s["pos"].is_number() ||
          !s["neg"].is_number()) {
        throw provider_error(options_.url + ": malformed score entry");
      }
      SentimentScore score{s["pos"].get<double>(), s["neg"].get<double>()};
      try {
        validate_score(score, normalized_, options_.url);
      } catch (const Error& e) {
        throw provider_error(e.what());
      }
      out.push_back(score);
    }
    return out;
  };

  std::vector<SentimentScore> out;
  out.reserve(requests.size());
  const std::size_t wave = batch * std::max<std::size_t>(1, options_.max_concurrency);
  for (std::size_t start = 0; start < requests.size(); start += wave) {
    std::vector<std::future<std::vector<SentimentScore>>> pending;
    for (std::size_t b = start; b < std::min(requests.size(), start + wave); b += batch) {
      auto chunk = requests.subspan(b, std::min(batch, requests.size() - b));
      pending.push_back(std::async(std::launch::async, run_batch, chunk));
    }
    for (auto& f : pending) {
      auto part = f.get();
      out.insert(out.end(), part.begin(), part.end());
    }
  }
  return out;
}

void validate_score(const SentimentScore& score, bool normalized, const std::string& where) {
  auto in_range = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
  if (!in_range(score.pos) || !in_range(score.neg)) {
    throw validation_error(where + ": score out of range [0,1]");
  }
  if (normalized && std::abs(score.pos + score.neg - 1.0) > kNormalizedTolerance) {
    throw validation_error(where + ": normalized scores must sum to 1");
  }
}

SentimentFile load_sentiment_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw missing_store_error("cannot open sentiment file " + path.string());
  const std::string name = path.string();
  std::string line;
  if (!std::getline(in, line)) throw validation_error(name + ":1: missing header");
  json header = json::parse(line, nullptr, false);
  if (header.is_discarded() || !header.is_object()) throw validation_error(name + ":1: header is not a JSON object");
  if (header.value("format", "") != kFormat) throw validation_error(name + ":1: format must be \"llmrs-sentiments\"");
  if (!header.contains("version") || header["version"] != kVersion) {
    throw validation_error(name + ":1: unsupported version");
  }
  if (header.value("labels", json::array()) != json::array({"positive", "negative"})) {
    throw validation_error(name + ":1: labels must be [\"positive\",\"negative\"]");
  }
  if (!header.contains("provider") || !header["provider"].is_string()) {
    throw validation_error(name + ":1: provider must be a string");
  }
  if (!header.contains("normalized") || !header["normalized"].is_boolean()) {
    throw validation_error(name + ":1: normalized must be a boolean");
  }
  SentimentFile file;
  file.provider = header["provider"].get<std::string>();
  file.normalized = header["normalized"].get<bool>();

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = name + ":" + std::to_string(lineno);
    json row = json::parse(line, nullptr, false);
    if (row.is_discarded() || !row.is_object()) throw validation_error(where + ": not a JSON object");
    if (!row.contains("review_id") || !row["review_id"].is_string()) {
      throw validation_error(where + ": review_id must be a string");
    }
    if (!row.contains("pos") || !row["pos"].is_number() || !row.contains("neg") || !row["neg"].is_number()) {
      throw validation_error(where + ": pos and neg must be numbers");
    }
    SentimentScore score{row["pos"].get<double>(), row["neg"].get<double>()};
    validate_score(score, file.normalized, where);
    if (!file.scores.emplace(row["review_id"].get<std::string>(), score).second) {
      throw validation_error(where + ": duplicate review_id");
    }
  }
  return file;
}

void write_sentiment_file(const std::filesystem::path& path, const std::string& provider, bool normalized,
                          std::span<const SentimentRow> rows) {
  detail::AtomicFile file(path);
  auto& out = file.stream();
  nlohmann::ordered_json header = {{"format", kFormat},
                 {"version", kVersion},
                 {"labels", {"positive", "negative"}},
                 {"provider", provider},
                 {"normalized", normalized}};
  out << header.dump() << '\n';
  for (const auto& row : rows) {
    out << nlohmann::ordered_json{{"review_id", row.review_id}, {"pos", row.score.pos}, {"neg", row.score.neg}}.dump() << '\n';
  }
  file.commit();
}

std::optional<ProductSentimentAggregate> aggregate(std::span<const SentimentScore> scores) {
  if (scores.empty()) return std::nullopt;
  ProductSentimentAggregate agg;
  for (const auto& s : scores) {
    agg.positive += s.pos;
    agg.negative += s.neg;
  }
  agg.count = scores.size();
  return agg;
}

}  // namespace llmrs

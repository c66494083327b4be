#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "llmrs/catalog.hpp"
#include "llmrs/http_json.hpp"

namespace llmrs {

struct ScoreRequest {
  std::string_view review_id;
  std::string_view text;
};

// Per-review (pos, neg) scorer. Implementations must be callable from
// several threads at once.
class SentimentProvider {
 public:
  virtual ~SentimentProvider() = default;
  virtual std::string name() const = 0;
  // True when every score satisfies pos + neg = 1 within 1e-3.
  virtual bool normalized() const = 0;
  virtual std::vector<SentimentScore> score_batch(std::span<const ScoreRequest> requests) const = 0;

  SentimentScore score(const ScoreRequest& request) const { return score_batch({&request, 1}).front(); }
};

/// Word-list scorer: (p/(p+n), n/(p+n)) over lexicon hits, (0.5, 0.5) with no hits.
SentimentScore lexicon_score(std::string_view text);

class LexiconSentimentProvider final : public SentimentProvider {
 public:
  std::string name() const override { return "lexicon-v1"; }
  bool normalized() const override { return true; }
  std::vector<SentimentScore> score_batch(std::span<const ScoreRequest> requests) const override;
};

struct SentimentFile {
  std::string provider;
  bool normalized = false;
  std::map<std::string, SentimentScore, std::less<>> scores;
};

/// Looks scores up by review id; unknown ids are an error naming them.
class FileSentimentProvider final : public SentimentProvider {
 public:
  explicit FileSentimentProvider(SentimentFile file) : file_(std::move(file)) {}
  std::string name() const override { return file_.provider; }
  bool normalized() const override { return file_.normalized; }
  std::vector<SentimentScore> score_batch(std::span<const ScoreRequest> requests) const override;

 private:
  SentimentFile file_;
};

/// POST {"texts": [...]} -> {"scores": [{"pos": .., "neg": ..}, ...]}.
class HttpSentimentProvider final : public SentimentProvider {
 public:
  explicit HttpSentimentProvider(HttpEndpointOptions options, bool normalized = true)
      : options_(std::move(options)), normalized_(normalized) {}
  std::string name() const override { return "http"; }
  bool normalized() const override { return normalized_; }
  std::vector<SentimentScore> score_batch(std::span<const ScoreRequest> requests) const override;

 private:
  HttpEndpointOptions options_;
  bool normalized_;
};

/// Throws a validation error (prefixed with `where`) for non-finite or
/// out-of-range scores, or for normalized scores that do not sum to 1.
void validate_score(const SentimentScore& score, bool normalized, const std::string& where);

SentimentFile load_sentiment_file(const std::filesystem::path& path);

struct SentimentRow {
  std::string review_id;
  SentimentScore score;
};
void write_sentiment_file(const std::filesystem::path& path, const std::string& provider, bool normalized,
                          std::span<const SentimentRow> rows);

/// Sums over the scores; nullopt when empty.
std::optional<ProductSentimentAggregate> aggregate(std::span<const SentimentScore> scores);

}  // namespace llmrs

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "llmrs/catalog.hpp"
#include "llmrs/embed.hpp"

namespace llmrs {

enum class Ranker { kLlmrs, kBaseline };

std::string_view to_string(Ranker ranker);
std::optional<Ranker> parse_ranker(std::string_view s);

// Inclusive upper bounds; an absent bound does not filter.
struct Budget {
  std::optional<Money> max_price;
  std::optional<Money> max_license_fee;
  std::optional<Money> max_implementation_cost;
  std::optional<Money> max_maintenance_cost;
};

struct QueryRequest {
  std::string text;
  Budget budget;
  std::size_t top_k = 5;
  std::size_t preselect_m = 50;
  Ranker ranker = Ranker::kLlmrs;

  // Throws a validation error for empty text, negative bounds, or zero counts.
  void validate() const;
};

struct Recommendation {
  std::string product_id;
  std::string description;
  Money price = 0;
  Money license_fee = 0;
  Money implementation_cost = 0;
  Money maintenance_cost = 0;
  std::optional<double> rank_score;  // llmrs mode
  std::optional<double> avg_rating;  // baseline mode
  double similarity = 0;
  std::optional<int> consistent_rating;
};

enum class QueryStatus { kOk, kNoProductsWithinBudget };
std::string_view to_string(QueryStatus status);

struct QueryResult {
  QueryStatus status = QueryStatus::kOk;
  Ranker ranker = Ranker::kLlmrs;
  std::size_t within_budget = 0;     // products surviving the monetary filter
  std::size_t preselected = 0;       // cosine top-M candidates
  std::size_t excluded_unranked = 0; // candidates without a score for this ranker
  std::vector<Recommendation> results;
};

struct ComparisonResult {
  QueryResult llmrs;
  QueryResult baseline;
  std::vector<std::string> symmetric_difference;  // sorted product ids
};

/// R = (P - N) * S.
double rank_score(const ProductSentimentAggregate& agg);

/// Mean star rating; nullopt when there are no ratings.
std::optional<double> baseline_avg_rating(std::span<const int> ratings);

bool within_budget(const Product& product, const Budget& budget);

/// Catalog positions of the products satisfying every bound, in catalog order.
std::vector<std::size_t> monetary_filter(const Catalog& catalog, const Budget& budget);

/// monetary filter -> embed query -> cosine top-M over the survivors ->
/// order by R (llmrs) or average rating (baseline) -> top-k. Final ties go to
/// higher similarity, then lower product id.
QueryResult query(const QueryRequest& request, const Catalog& catalog, const EmbeddingIndex& index,
                  const EmbeddingProvider& provider, const TopKOptions& scan = {});

/// Both rankers over one shared preselection.
ComparisonResult compare(const QueryRequest& request, const Catalog& catalog, const EmbeddingIndex& index,
                         const EmbeddingProvider& provider, const TopKOptions& scan = {});

}  // namespace llmrs

#include "llmrs/rank.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "llmrs/error.hpp"

namespace llmrs {

std::string_view to_string(Ranker ranker) { return ranker == Ranker::kLlmrs ? "llmrs" : "baseline"; }

std::optional<Ranker> parse_ranker(std::string_view s) {
  if (s == "llmrs") return Ranker::kLlmrs;
  if (s == "baseline") return Ranker::kBaseline;
  return std::nullopt;
}

std::string_view to_string(QueryStatus status) {
  return status == QueryStatus::kOk ? "ok" : "no products within budget";
}

void QueryRequest::validate() const {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw validation_error("query text must not be empty");
  auto check = [](const std::optional<Money>& bound, const char* name) {
    if (bound && (!std::isfinite(*bound) || *bound < 0.0)) {
      throw validation_error(std::string(name) + " must be a non-negative number");
    }
  };
  check(budget.max_price, "max_price");
  check(budget.max_license_fee, "max_license_fee");
  check(budget.max_implementation_cost, "max_implementation_cost");
  check(budget.max_maintenance_cost, "max_maintenance_cost");
  if (top_k == 0) throw validation_error("top_k must be >= 1");
  if (preselect_m == 0) throw validation_error("preselect_m must be >= 1");
}

double rank_score(const ProductSentimentAggregate& agg) {
  return (agg.positive - agg.negative) * static_cast<double>(agg.count);
}

std::optional<double> baseline_avg_rating(std::span<const int> ratings) {
  if (ratings.empty()) return std::nullopt;
  long long sum = 0;
  for (int r : ratings) sum += r;
  return static_cast<double>(sum) / static_cast<double>(ratings.size());
}

bool within_budget(const Product& p, const Budget& b) {
  auto ok = [](Money value, const std::optional<Money>& bound) { return !bound || value <= *bound; };
  return ok(p.price, b.max_price) && ok(p.license_fee, b.max_license_fee) &&
         ok(p.implementation_cost, b.max_implementation_cost) && ok(p.maintenance_cost, b.max_maintenance_cost);
}

std::vector<std::size_t> monetary_filter(const Catalog& catalog, const Budget& budget) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < catalog.products.size(); ++i) {
    if (within_budget(catalog.products[i], budget)) out.push_back(i);
  }
  return out;
}

namespace {

struct Preselection {
  QueryStatus status = QueryStatus::kOk;
  std::size_t within_budget = 0;
  std::vector<Neighbor> candidates;
};

Preselection preselect(const QueryRequest& request, const Catalog& catalog, const EmbeddingIndex& index,
                       const EmbeddingProvider& provider, const TopKOptions& scan) {
  request.validate();
  Preselection out;
  const auto kept = monetary_filter(catalog, request.budget);
  out.within_budget = kept.size();
  if (kept.empty()) {
    out.status = QueryStatus::kNoProductsWithinBudget;
    return out;
  }
  std::vector<std::uint32_t> rows;
  rows.reserve(kept.size());
  for (std::size_t pos : kept) {
    auto row = index.find(catalog.products[pos].id);
    if (!row) throw validation_error("product '" + catalog.products[pos].id + "' has no embedding");
    rows.push_back(*row);
  }
  const EmbeddingVector query = provider.embed(request.text);
  out.candidates = top_k_similar(query.values, index, request.preselect_m, std::span<const std::uint32_t>(rows), scan);
  return out;
}

QueryResult rank_candidates(const Preselection& pre, const QueryRequest& request, const Catalog& catalog,
                            Ranker ranker) {
  QueryResult result;
  result.status = pre.status;
  result.ranker = ranker;
  result.within_budget = pre.within_budget;
  result.preselected = pre.candidates.size();

  std::vector<std::pair<double, Recommendation>> scored;
  for (const auto& c : pre.candidates) {
    const Product* p = catalog.find(c.product_id);
    Recommendation rec{p->id, p->description, p->price, p->license_fee, p->implementation_cost,
                       p->maintenance_cost, std::nullopt, std::nullopt, c.similarity, p->consistent_rating};
    double key = 0.0;
    if (ranker == Ranker::kLlmrs) {
      if (!p->sentiment) {
        ++result.excluded_unranked;
        continue;
      }
      key = *(rec.rank_score = rank_score(*p->sentiment));
    } else {
      if (!p->avg_rating) {
        ++result.excluded_unranked;
        continue;
      }
      key = *(rec.avg_rating = p->avg_rating);
    }
    scored.emplace_back(key, std::move(rec));
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    if (a.second.similarity != b.second.similarity) return a.second.similarity > b.second.similarity;
    return a.second.product_id < b.second.product_id;
  });
  for (std::size_t i = 0; i < scored.size() && i < request.top_k; ++i) result.results.push_back(std::move(scored[i].second));
  return result;
}

}  // namespace

QueryResult query(const QueryRequest& request, const Catalog& catalog, const EmbeddingIndex& index,
                  const EmbeddingProvider& provider, const TopKOptions& scan) {
  return rank_candidates(preselect(request, catalog, index, provider, scan), request, catalog, request.ranker);
}

ComparisonResult compare(const QueryRequest& request, const Catalog& catalog, const EmbeddingIndex& index,
                         const EmbeddingProvider& provider, const TopKOptions& scan) {
  const auto pre = preselect(request, catalog, index, provider, scan);
  ComparisonResult out{rank_candidates(pre, request, catalog, Ranker::kLlmrs),
                       rank_candidates(pre, request, catalog, Ranker::kBaseline), {}};
  std::set<std::string> a, b;
  for (const auto& r : out.llmrs.results) a.insert(r.product_id);
  for (const auto& r : out.baseline.results) b.insert(r.product_id);
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out.symmetric_difference));
  return out;
}

}  // namespace llmrs

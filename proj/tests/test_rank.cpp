#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "llmrs/error.hpp"
#include "llmrs/rank.hpp"
#include "support/fixtures.hpp"

namespace llmrs {
namespace {

struct Fixture {
  Catalog catalog;
  EmbeddingIndex index{32, "fallback-hash-v1"};
  FallbackEmbeddingProvider embedder{32};

  Product& add(const std::string& id, const std::string& desc, Money price,
               std::optional<ProductSentimentAggregate> agg = std::nullopt, std::optional<double> avg = std::nullopt) {
    Product p;
    p.id = id;
    p.description = desc;
    p.price = price;
    p.sentiment = agg;
    p.avg_rating = avg;
    catalog.products.push_back(p);
    catalog.reindex();
    index.add(id, fallback_embed(desc, 32).values);
    return catalog.products.back();
  }
};

TEST(RankScore, Examples) {
  EXPECT_EQ(rank_score({1.0, 0.0, 1}), 1.0);
  EXPECT_EQ(rank_score({2.5, 0.5, 3}), 6.0);
  EXPECT_EQ(rank_score({0.7, 0.7, 9}), 0.0);
  EXPECT_LT(rank_score({0.2, 0.8, 1}), 0.0);
}

TEST(RankScore, AppendingNetPositiveReviewIncreasesScore) {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t s = 1 + rng() % 200;
    const double n = unit(rng) * static_cast<double>(s) / 2.0;
    const double p = n + unit(rng) * (static_cast<double>(s) - 2.0 * n);
    double pos = unit(rng), neg = unit(rng);
    if (pos <= neg) std::swap(pos, neg);
    if (pos == neg) pos = std::min(1.0, neg + 1e-3);
    ProductSentimentAggregate before{p, n, s};
    ProductSentimentAggregate after{p + pos, n + neg, s + 1};
    EXPECT_GT(rank_score(after), rank_score(before));
  }
}

TEST(Baseline, Examples) {
  EXPECT_EQ(*baseline_avg_rating(std::vector<int>{5}), 5.0);
  EXPECT_EQ(*baseline_avg_rating(std::vector<int>{5, 5, 5}), 5.0);
  EXPECT_EQ(*baseline_avg_rating(std::vector<int>{5, 3}), 4.0);
  EXPECT_FALSE(baseline_avg_rating(std::vector<int>{}));
}

TEST(MonetaryFilter, Examples) {
  Fixture f;
  f.add("a", "x", 10);
  f.add("b", "y", 20);
  f.add("c", "z", 30);
  EXPECT_EQ(monetary_filter(f.catalog, {}).size(), 3u);
  EXPECT_EQ(monetary_filter(f.catalog, {.max_price = 20.0}), (std::vector<std::size_t>{0, 1}));
  EXPECT_TRUE(monetary_filter(f.catalog, {.max_price = 0.0}).empty());
  f.add("free", "w", 0);
  EXPECT_EQ(monetary_filter(f.catalog, {.max_price = 0.0}), (std::vector<std::size_t>{3}));
}

TEST(MonetaryFilter, SubsetIdempotentMonotone) {
  std::mt19937_64 rng(62);
  std::uniform_real_distribution<double> money(0.0, 100.0);
  Catalog c;
  for (int i = 0; i < 300; ++i) {
    Product p;
    p.id = std::to_string(i);
    p.price = money(rng);
    p.license_fee = money(rng) / 10;
    p.implementation_cost = money(rng) / 2;
    p.maintenance_cost = money(rng) / 100;
    c.products.push_back(p);
  }
  c.reindex();
  for (int trial = 0; trial < 100; ++trial) {
    Budget b{money(rng), money(rng) / 10, std::nullopt, money(rng) / 100};
    auto kept = monetary_filter(c, b);
    Catalog sub;
    for (auto i : kept) sub.products.push_back(c.products[i]);
    sub.reindex();
    EXPECT_EQ(monetary_filter(sub, b).size(), kept.size());
    Budget tighter = b;
    tighter.max_price = *b.max_price * 0.7;
    tighter.max_implementation_cost = money(rng) / 2;
    auto tight = monetary_filter(c, tighter);
    EXPECT_TRUE(std::includes(kept.begin(), kept.end(), tight.begin(), tight.end()));
    for (auto i : kept) EXPECT_TRUE(within_budget(c.products[i], b));
  }
}

TEST(QueryRequest, Validation) {
  QueryRequest ok{.text = "hr"};
  EXPECT_NO_THROW(ok.validate());
  EXPECT_THROW((QueryRequest{.text = "  "}.validate()), Error);
  EXPECT_THROW((QueryRequest{.text = "hr", .budget = {.max_price = -1.0}}.validate()), Error);
  EXPECT_THROW((QueryRequest{.text = "hr", .top_k = 0}.validate()), Error);
  EXPECT_THROW((QueryRequest{.text = "hr", .preselect_m = 0}.validate()), Error);
}

TEST(Query, SingleProduct) {
  Fixture f;
  f.add("only", "payroll manager", 10, ProductSentimentAggregate{0.9, 0.1, 1}, 4.0);
  auto r = query({.text = "payroll"}, f.catalog, f.index, f.embedder);
  ASSERT_EQ(r.results.size(), 1u);
  EXPECT_EQ(r.results[0].product_id, "only");
  EXPECT_EQ(r.status, QueryStatus::kOk);
}

TEST(Query, HigherRankScoreWinsAmongIdenticalDescriptions) {
  Fixture f;
  f.add("one", "hr records", 10, ProductSentimentAggregate{1, 0, 1});
  f.add("two", "hr records", 10, ProductSentimentAggregate{2, 0, 2});
  auto r = query({.text = "hr records"}, f.catalog, f.index, f.embedder);
  ASSERT_EQ(r.results.size(), 2u);
  EXPECT_EQ(r.results[0].product_id, "two");
  EXPECT_EQ(*r.results[0].rank_score, 4.0);
  EXPECT_EQ(*r.results[1].rank_score, 1.0);
  EXPECT_FALSE(r.results[0].avg_rating);
}

TEST(Query, TiesBreakBySimilarityThenId) {
  Fixture f;
  f.add("b", "hr records", 10, ProductSentimentAggregate{1, 0, 1});
  f.add("a", "hr records", 10, ProductSentimentAggregate{1, 0, 1});
  f.add("c", "hr records photo", 10, ProductSentimentAggregate{1, 0, 1});
  auto r = query({.text = "hr records"}, f.catalog, f.index, f.embedder);
  ASSERT_EQ(r.results.size(), 3u);
  EXPECT_EQ(r.results[0].product_id, "a");
  EXPECT_EQ(r.results[1].product_id, "b");
  EXPECT_EQ(r.results[2].product_id, "c");
}

TEST(Query, NoProductsWithinBudget) {
  Fixture f;
  f.add("a", "x", 10, ProductSentimentAggregate{1, 0, 1});
  auto r = query({.text = "x", .budget = {.max_price = 5.0}}, f.catalog, f.index, f.embedder);
  EXPECT_EQ(r.status, QueryStatus::kNoProductsWithinBudget);
  EXPECT_TRUE(r.results.empty());
  EXPECT_EQ(to_string(r.status), "no products within budget");
}

TEST(Query, UnscoredProductsAreExcludedAndCounted) {
  Fixture f;
  f.add("scored", "tax", 10, ProductSentimentAggregate{1, 0, 1}, 3.0);
  f.add("bare", "tax", 10);
  auto r = query({.text = "tax"}, f.catalog, f.index, f.embedder);
  EXPECT_EQ(r.results.size(), 1u);
  EXPECT_EQ(r.excluded_unranked, 1u);
  auto b = query({.text = "tax", .ranker = Ranker::kBaseline}, f.catalog, f.index, f.embedder);
  EXPECT_EQ(b.results.size(), 1u);
  EXPECT_EQ(*b.results[0].avg_rating, 3.0);
  EXPECT_FALSE(b.results[0].rank_score);
}

TEST(Query, PreselectionSoundnessAndBudget) {
  std::mt19937_64 rng(63);
  const std::vector<std::string> words = {"hr", "payroll", "tax", "photo", "video", "backup", "editor", "records"};
  Fixture f;
  std::uniform_real_distribution<double> money(0, 100);
  for (int i = 0; i < 200; ++i) {
    std::string desc;
    for (int w = 0; w < 3; ++w) desc += words[rng() % words.size()] + " ";
    auto& p = f.add("P" + std::to_string(1000 + i), desc, money(rng),
                    ProductSentimentAggregate{money(rng) / 100, money(rng) / 100, 1 + rng() % 5});
    p.maintenance_cost = money(rng) / 10;
  }
  QueryRequest req{.text = "hr records", .budget = {.max_price = 60.0, .max_maintenance_cost = 5.0}, .top_k = 5,
                   .preselect_m = 12};
  auto r = query(req, f.catalog, f.index, f.embedder);
  auto kept = monetary_filter(f.catalog, req.budget);
  std::vector<std::uint32_t> rows;
  for (auto i : kept) rows.push_back(*f.index.find(f.catalog.products[i].id));
  auto pre = top_k_similar(fallback_embed("hr records", 32).values, f.index, 12, std::span<const std::uint32_t>(rows));
  ASSERT_EQ(r.results.size(), 5u);
  for (const auto& rec : r.results) {
    EXPECT_LE(rec.price, 60.0);
    EXPECT_LE(rec.maintenance_cost, 5.0);
    EXPECT_TRUE(std::any_of(pre.begin(), pre.end(), [&](const Neighbor& n) { return n.product_id == rec.product_id; }));
  }
  for (std::size_t i = 1; i < r.results.size(); ++i) EXPECT_GE(*r.results[i - 1].rank_score, *r.results[i].rank_score);
}

TEST(Compare, DisagreementAndAgreement) {
  Fixture f;
  f.add("many", "hr records", 10, ProductSentimentAggregate{70, 30, 100}, 3.2);
  f.add("single", "hr records", 10, ProductSentimentAggregate{0.9, 0.1, 1}, 5.0);
  auto c = compare({.text = "hr records", .top_k = 1}, f.catalog, f.index, f.embedder);
  EXPECT_EQ(c.llmrs.results[0].product_id, "many");
  EXPECT_EQ(c.baseline.results[0].product_id, "single");
  EXPECT_EQ(c.symmetric_difference, (std::vector<std::string>{"many", "single"}));

  Fixture g;
  g.add("solo", "hr", 10, ProductSentimentAggregate{1, 0, 1}, 5.0);
  auto same = compare({.text = "hr"}, g.catalog, g.index, g.embedder);
  EXPECT_TRUE(same.symmetric_difference.empty());
  EXPECT_EQ(same.llmrs.results.size(), 1u);
  EXPECT_EQ(same.baseline.results.size(), 1u);
}

}  // namespace
}  // namespace llmrs

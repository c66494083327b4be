#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "llmrs/error.hpp"
#include "llmrs/text.hpp"
#include "llmrs/tfidf.hpp"
#include "support/fixtures.hpp"

namespace llmrs {
namespace {

using Tokens = std::vector<std::string>;

TEST(Tokenize, Rules) {
  EXPECT_EQ(tokenize("Great HR tool!"), (Tokens{"great", "hr", "tool"}));
  EXPECT_EQ(tokenize(""), Tokens{});
  EXPECT_EQ(tokenize("the a an"), Tokens{});
  EXPECT_EQ(tokenize("x y z win10--WIN10"), (Tokens{"win10", "win10"}));
}

TEST(Tokenize, StopwordListIsSorted) {
  auto words = stopwords();
  EXPECT_TRUE(std::is_sorted(words.begin(), words.end()));
}

TEST(Tfidf, EmptyCorpusIsError) { EXPECT_THROW(TfidfModel::fit({}), Error); }

TEST(Tfidf, IdfFormula) {
  std::vector<std::string> one = {"alpha"};
  EXPECT_DOUBLE_EQ(TfidfModel::fit(one).idf()[0], 1.0);

  std::vector<std::string> both = {"alpha", "alpha"};
  EXPECT_DOUBLE_EQ(TfidfModel::fit(both).idf()[0], 1.0);

  std::vector<std::string> half = {"alpha", "beta"};
  auto m = TfidfModel::fit(half);
  EXPECT_NEAR(m.idf()[0], 1.4054651081081644, 1e-12);  // ln(3/2) + 1
}

// Hand corpus {"alpha beta", "alpha", "gamma"}: idf(alpha) = ln(4/3)+1,
// idf(beta) = ln(2)+1; transform("alpha beta") = idf / |idf|.
TEST(Tfidf, HandCorpus) {
  std::vector<std::string> corpus = {"alpha beta", "alpha", "gamma"};
  auto m = TfidfModel::fit(corpus);
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m.vocabulary().at("alpha"), 0u);
  EXPECT_EQ(m.vocabulary().at("beta"), 1u);
  EXPECT_EQ(m.vocabulary().at("gamma"), 2u);
  EXPECT_NEAR(m.idf()[0], 1.2876820724517808, 1e-12);
  EXPECT_NEAR(m.idf()[1], 1.6931471805599454, 1e-12);
  auto v = m.transform("alpha beta");
  ASSERT_EQ(v.indices, (std::vector<std::uint32_t>{0, 1}));
  EXPECT_NEAR(v.values[0], 0.6053485081062916, 1e-9);
  EXPECT_NEAR(v.values[1], 0.7959605415681652, 1e-9);
}

TEST(Tfidf, TransformEdgeCases) {
  std::vector<std::string> corpus = {"alpha beta", "gamma"};
  auto m = TfidfModel::fit(corpus);
  EXPECT_TRUE(m.transform("unknown words only").empty());
  auto single = m.transform("gamma");
  ASSERT_EQ(single.nnz(), 1u);
  EXPECT_DOUBLE_EQ(single.values[0], 1.0);
}

TEST(Tfidf, MinDfAndMaxVocabulary) {
  std::vector<std::string> corpus = {"alpha beta", "alpha gamma", "alpha beta delta"};
  auto pruned = TfidfModel::fit(corpus, {.min_df = 2});
  EXPECT_EQ(pruned.size(), 2u);  // alpha, beta
  auto capped = TfidfModel::fit(corpus, {.max_vocabulary = 1});
  ASSERT_EQ(capped.size(), 1u);
  EXPECT_TRUE(capped.vocabulary().contains("alpha"));
}

class TfidfProperties : public ::testing::Test {
 protected:
  std::vector<std::string> random_corpus(std::mt19937_64& rng, std::size_t docs) {
    const std::vector<std::string> words = {"install", "crash", "fast", "license", "support", "update", "windows",
                                            "backup",  "editor", "tax",  "payroll", "manager", "great", "slow"};
    std::vector<std::string> corpus;
    for (std::size_t d = 0; d < docs; ++d) {
      std::string doc;
      const std::size_t n = rng() % 12;
      for (std::size_t i = 0; i < n; ++i) doc += words[rng() % words.size()] + " ";
      corpus.push_back(doc);
    }
    return corpus;
  }
};

TEST_F(TfidfProperties, UnitNorm) {
  std::mt19937_64 rng(5);
  auto corpus = random_corpus(rng, 300);
  auto m = TfidfModel::fit(corpus);
  for (const auto& v : m.transform_all(corpus)) {
    if (v.empty()) continue;
    EXPECT_NEAR(std::sqrt(v.squared_norm()), 1.0, 1e-9);
    EXPECT_TRUE(std::is_sorted(v.indices.begin(), v.indices.end()));
  }
}

TEST_F(TfidfProperties, DuplicatingTokensKeepsDirection) {
  std::mt19937_64 rng(6);
  auto corpus = random_corpus(rng, 100);
  auto m = TfidfModel::fit(corpus);
  for (const auto& doc : corpus) {
    auto a = m.transform(doc);
    auto b = m.transform(doc + " " + doc);
    ASSERT_EQ(a.indices, b.indices);
    for (std::size_t i = 0; i < a.nnz(); ++i) EXPECT_NEAR(a.values[i], b.values[i], 1e-12);
  }
}

TEST_F(TfidfProperties, VocabularyIndependentOfCorpusOrder) {
  std::mt19937_64 rng(7);
  auto corpus = random_corpus(rng, 80);
  auto shuffled = corpus;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  auto a = TfidfModel::fit(corpus);
  auto b = TfidfModel::fit(shuffled);
  EXPECT_EQ(a.vocabulary(), b.vocabulary());
  EXPECT_EQ(a.idf(), b.idf());
}

TEST_F(TfidfProperties, ParallelTransformMatchesSerial) {
  std::mt19937_64 rng(8);
  auto corpus = random_corpus(rng, 2000);
  auto m = TfidfModel::fit(corpus);
  auto rows = m.transform_all(corpus);
  for (std::size_t i = 0; i < corpus.size(); ++i) EXPECT_EQ(rows[i], m.transform(corpus[i]));
}

TEST(Tfidf, SaveLoadRoundTrip) {
  testing::TempDir dir;
  std::vector<std::string> corpus = {"alpha beta", "alpha", "gamma"};
  auto m = TfidfModel::fit(corpus);
  m.save(dir / "tfidf.json");
  auto back = TfidfModel::load(dir / "tfidf.json");
  EXPECT_EQ(back.vocabulary(), m.vocabulary());
  EXPECT_EQ(back.idf(), m.idf());
  EXPECT_EQ(back.num_docs(), 3u);
  auto doc = nlohmann::json::parse(testing::read_file(dir / "tfidf.json"));
  EXPECT_EQ(doc["stopword_list_version"], std::string(kStopwordListVersion));
  EXPECT_EQ(doc["terms"].size(), 3u);
}

}  // namespace
}  // namespace llmrs

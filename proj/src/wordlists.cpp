#include <algorithm>
#include <array>
#include <string_view>

#include "llmrs/text.hpp"

namespace llmrs {
namespace {

// All three lists must stay sorted; lookups use binary search.
constexpr std::array<std::string_view, 144> kStopwords = {
    "about", "above", "after", "again", "against", "all", "am", "an", "and", "any", "are",
    "aren", "as", "at", "be", "because", "been", "before", "being", "below", "between", "both",
    "but", "by", "can", "cannot", "could", "couldn", "did", "didn", "do", "does", "doesn",
    "doing", "don", "down", "during", "each", "few", "for", "from", "further", "had", "hadn",
    "has", "hasn", "have", "haven", "having", "he", "her", "here", "hers", "herself", "him",
    "himself", "his", "how", "if", "in", "into", "is", "isn", "it", "its", "itself", "just",
    "ll", "me", "more", "most", "my", "myself", "no", "nor", "not", "now", "of", "off", "on",
    "once", "only", "or", "other", "ought", "our", "ours", "ourselves", "out", "over", "own",
    "re", "same", "shan", "she", "should", "shouldn", "so", "some", "such", "than", "that",
    "the", "their", "theirs", "them", "themselves", "then", "there", "these", "they", "this",
    "those", "through", "to", "too", "under", "until", "up", "ve", "very", "was", "wasn", "we",
    "were", "weren", "what", "when", "where", "which", "while", "who", "whom", "why", "will",
    "with", "won", "would", "wouldn", "you", "your", "yours", "yourself", "yourselves",
};

constexpr std::array<std::string_view, 50> kPositiveWords = {
    "amazing", "awesome", "best", "better", "brilliant", "easier", "easy", "effective",
    "efficient", "enjoy", "enjoyed", "excellent", "exceptional", "fantastic", "fast",
    "favorite", "fine", "flawless", "friendly", "glad", "good", "great", "happy", "helpful",
    "impressed", "impressive", "intuitive", "love", "loved", "loves", "nice", "perfect",
    "perfectly", "pleased", "powerful", "recommend", "recommended", "reliable", "robust",
    "satisfied", "simple", "smooth", "solid", "stable", "superb", "useful", "valuable",
    "wonderful", "works", "worth",
};

constexpr std::array<std::string_view, 45> kNegativeWords = {
    "annoying", "awful", "bad", "broken", "buggy", "bugs", "clunky", "confusing", "corrupt",
    "crap", "crash", "crashed", "crashes", "crashing", "defective", "difficult", "disappointed",
    "disappointing", "error", "errors", "fail", "failed", "fails", "failure", "frustrating",
    "garbage", "hate", "hated", "horrible", "junk", "lousy", "mess", "poor", "poorly",
    "problem", "problems", "refund", "slow", "terrible", "unusable", "useless", "waste",
    "worse", "worst", "wrong",
};

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& words, std::string_view token) {
  return std::binary_search(words.begin(), words.end(), token);
}

}  // namespace

bool is_stopword(std::string_view token) { return contains(kStopwords, token); }
bool is_positive_word(std::string_view token) { return contains(kPositiveWords, token); }
bool is_negative_word(std::string_view token) { return contains(kNegativeWords, token); }

std::span<const std::string_view> stopwords() { return kStopwords; }

}  // namespace llmrs

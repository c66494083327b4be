#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace llmrs {

// Version tag of the shipped stopword list; persisted with fitted TF-IDF models.
inline constexpr std::string_view kStopwordListVersion = "en-stop-v1";

/// Lowercases, splits on runs of non-alphanumeric ASCII, and drops tokens
/// shorter than two characters or present in the stopword list.
std::vector<std::string> tokenize(std::string_view text);

bool is_stopword(std::string_view token);

// Word lists backing the lexicon sentiment provider.
bool is_positive_word(std::string_view token);
bool is_negative_word(std::string_view token);

std::span<const std::string_view> stopwords();

}  // namespace llmrs

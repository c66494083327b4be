#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace llmrs {

// Sparse row with strictly increasing indices and no stored zeros.
struct SparseVector {
  std::vector<std::uint32_t> indices;
  std::vector<double> values;

  bool empty() const { return indices.empty(); }
  std::size_t nnz() const { return indices.size(); }
  double squared_norm() const;

  friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

struct TfidfOptions {
  std::size_t min_df = 1;
  std::size_t max_vocabulary = std::numeric_limits<std::size_t>::max();
};

class TfidfModel {
 public:
  TfidfModel() = default;

  // Column index per term; columns follow lexicographic term order.
  const std::map<std::string, std::uint32_t, std::less<>>& vocabulary() const { return vocabulary_; }
  const std::vector<double>& idf() const { return idf_; }
  std::size_t num_docs() const { return num_docs_; }
  std::size_t min_df() const { return min_df_; }
  std::size_t size() const { return idf_.size(); }

  /// Smoothed IDF: ln((1 + N) / (1 + df)) + 1.
  static TfidfModel fit(std::span<const std::string> corpus, const TfidfOptions& options = {});

  /// Raw counts times idf, L2-normalized. Out-of-vocabulary tokens are ignored.
  SparseVector transform(std::string_view doc) const;
  std::vector<SparseVector> transform_all(std::span<const std::string> docs) const;

  void save(const std::filesystem::path& path) const;
  static TfidfModel load(const std::filesystem::path& path);

 private:
  std::map<std::string, std::uint32_t, std::less<>> vocabulary_;
  std::vector<double> idf_;
  std::size_t num_docs_ = 0;
  std::size_t min_df_ = 1;
};

}  // namespace llmrs

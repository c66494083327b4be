#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "llmrs/catalog.hpp"
#include "llmrs/tfidf.hpp"

namespace llmrs {

struct KMeansOptions {
  std::size_t k = 5;
  std::uint64_t seed = 0;
  std::size_t max_iters = 100;
  double tol = 1e-4;      // stop once every centroid moves less than this
  bool parallel = true;   // false runs the serial reference kernels
};

struct ClusterModel {
  std::size_t k = 0;
  std::size_t dim = 0;
  std::uint64_t seed = 0;
  std::vector<double> centroids;   // k * dim, row-major
  std::vector<int> assignments;    // one per input point
  std::size_t iterations_run = 0;
  double final_sse = 0.0;
  std::vector<double> sse_history;  // SSE after each assignment step

  std::span<const double> centroid(std::size_t c) const { return {centroids.data() + c * dim, dim}; }
};

/// Lloyd's algorithm with k-means++ seeding. Points live in a `dim`-column
/// space; an empty cluster is reseeded at the point farthest from its own
/// centroid. Throws a validation error when fewer than k distinct points exist.
ClusterModel kmeans(std::span<const SparseVector> points, std::size_t dim, const KMeansOptions& options);

enum class SentimentLabel { kPositive, kNegative };

// Ties label negative.
SentimentLabel label_review(const SentimentScore& score);

struct ClusterStats {
  std::size_t positive = 0;  // x_p
  std::size_t negative = 0;  // x_n
  double rate = 0.0;         // Y
  int rating = 0;            // 1..k
};

/// Y = x_p / (x_p + x_n). Throws when the cluster has no labeled reviews.
double cluster_rate(std::size_t positive, std::size_t negative);

/// Ratings 1..k by ascending rate; equal rates rank by cluster index.
std::vector<int> assign_cluster_ratings(std::span<const double> rates);

/// Counts labels per cluster, then fills rate and rating.
std::vector<ClusterStats> cluster_stats(std::span<const int> assignments,
                                        std::span<const SentimentLabel> labels, std::size_t k);

/// Rating given to reviews excluded from clustering: the median of 1..k, rounded up.
int median_cluster_rating(std::size_t k);

/// Mean of the review cluster ratings, rounded half up; nullopt when empty.
std::optional<int> consistent_rating(std::span<const int> review_ratings);

void save_clusters(const std::filesystem::path& path, const ClusterModel& model,
                   std::span<const ClusterStats> stats, std::span<const std::string> review_ids);

}  // namespace llmrs

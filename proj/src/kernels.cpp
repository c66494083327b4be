#include "llmrs/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace llmrs::kernels {

double dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double l2_norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double dot(const SparseVector& a, std::span<const double> dense) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.indices.size(); ++i) sum += a.values[i] * dense[a.indices[i]];
  return sum;
}

namespace {

inline double cosine_at(std::span<const double> query, double query_norm, const DenseRows& rows,
                        std::span<const double> row_norms, std::uint32_t r) {
  const double c = dot(query, rows.row(r)) / (query_norm * row_norms[r]);
  return std::clamp(c, -1.0, 1.0);
}

inline void nearest(const SparseVector& x, double x_sq, const DenseRows& centroids,
                    std::span<const double> centroid_sq_norms, int& best, double& best_d) {
  best = 0;
  best_d = 0.0;
  for (std::size_t c = 0; c < centroids.rows(); ++c) {
    const double d = std::max(0.0, x_sq - 2.0 * dot(x, centroids.row(c)) + centroid_sq_norms[c]);
    if (c == 0 || d < best_d) {
      best = static_cast<int>(c);
      best_d = d;
    }
  }
}

inline void accumulate_one(std::span<const SparseVector> points, std::span<const int> assignment,
                           std::size_t c, std::size_t dim, std::span<double> sums,
                           std::span<std::size_t> counts) {
  double* row = sums.data() + c * dim;
  std::fill(row, row + dim, 0.0);
  std::size_t n = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (assignment[i] != static_cast<int>(c)) continue;
    const auto& p = points[i];
    for (std::size_t j = 0; j < p.indices.size(); ++j) row[p.indices[j]] += p.values[j];
    ++n;
  }
  counts[c] = n;
}

}  // namespace

void cosine_scan(std::span<const double> query, double query_norm, const DenseRows& rows,
                 std::span<const double> row_norms, std::span<const std::uint32_t> subset,
                 std::span<double> out) {
  const auto n = static_cast<std::int64_t>(subset.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < n; ++j) out[j] = cosine_at(query, query_norm, rows, row_norms, subset[j]);
}

void assign_nearest(std::span<const SparseVector> points, std::span<const double> point_sq_norms,
                    const DenseRows& centroids, std::span<const double> centroid_sq_norms,
                    std::span<int> assignment, std::span<double> sq_distance) {
  const auto n = static_cast<std::int64_t>(points.size());
#pragma omp parallel for schedule(dynamic, 1024)
  for (std::int64_t i = 0; i < n; ++i) {
    nearest(points[i], point_sq_norms[i], centroids, centroid_sq_norms, assignment[i], sq_distance[i]);
  }
}

void accumulate_centroids(std::span<const SparseVector> points, std::span<const int> assignment,
                          std::size_t k, std::size_t dim, std::span<double> sums,
                          std::span<std::size_t> counts) {
  // One cluster per iteration keeps each sum in point order.
  const auto kk = static_cast<std::int64_t>(k);
#pragma omp parallel for schedule(static, 1)
  for (std::int64_t c = 0; c < kk; ++c) accumulate_one(points, assignment, c, dim, sums, counts);
}

namespace serial {

void cosine_scan(std::span<const double> query, double query_norm, const DenseRows& rows,
                 std::span<const double> row_norms, std::span<const std::uint32_t> subset,
                 std::span<double> out) {
  for (std::size_t j = 0; j < subset.size(); ++j) out[j] = cosine_at(query, query_norm, rows, row_norms, subset[j]);
}

void assign_nearest(std::span<const SparseVector> points, std::span<const double> point_sq_norms,
                    const DenseRows& centroids, std::span<const double> centroid_sq_norms,
                    std::span<int> assignment, std::span<double> sq_distance) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    nearest(points[i], point_sq_norms[i], centroids, centroid_sq_norms, assignment[i], sq_distance[i]);
  }
}

void accumulate_centroids(std::span<const SparseVector> points, std::span<const int> assignment,
                          std::size_t k, std::size_t dim, std::span<double> sums,
                          std::span<std::size_t> counts) {
  for (std::size_t c = 0; c < k; ++c) accumulate_one(points, assignment, c, dim, sums, counts);
}

}  // namespace serial
}  // namespace llmrs::kernels

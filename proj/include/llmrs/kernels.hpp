#pragma once

// Data-parallel inner loops. Each kernel has an OpenMP version and a serial
// reference in `kernels::serial`; both produce bit-identical results because
// per-element work is independent and every reduction runs in a fixed order.

#include <cstddef>
#include <cstdint>
#include <span>

#include "llmrs/tfidf.hpp"

namespace llmrs::kernels {

// Row-major dense matrix, `rows() * dim` values.
struct DenseRows {
  std::span<const double> data;
  std::size_t dim = 0;

  std::size_t rows() const { return dim == 0 ? 0 : data.size() / dim; }
  std::span<const double> row(std::size_t i) const { return data.subspan(i * dim, dim); }
};

double dot(std::span<const double> a, std::span<const double> b);
double l2_norm(std::span<const double> a);

// Sparse-dense dot product, accumulated in index order.
double dot(const SparseVector& a, std::span<const double> dense);

/// out[j] = cos(query, rows[subset[j]]) using precomputed row norms, clamped to [-1, 1].
void cosine_scan(std::span<const double> query, double query_norm, const DenseRows& rows,
                 std::span<const double> row_norms, std::span<const std::uint32_t> subset,
                 std::span<double> out);

/// Nearest centroid by squared Euclidean distance; ties go to the lower index.
void assign_nearest(std::span<const SparseVector> points, std::span<const double> point_sq_norms,
                    const DenseRows& centroids, std::span<const double> centroid_sq_norms,
                    std::span<int> assignment, std::span<double> sq_distance);

/// sums[c * dim + j] and counts[c] over the points assigned to cluster c,
/// added in point order.
void accumulate_centroids(std::span<const SparseVector> points, std::span<const int> assignment,
                          std::size_t k, std::size_t dim, std::span<double> sums,
                          std::span<std::size_t> counts);

namespace serial {

void cosine_scan(std::span<const double> query, double query_norm, const DenseRows& rows,
                 std::span<const double> row_norms, std::span<const std::uint32_t> subset,
                 std::span<double> out);

void assign_nearest(std::span<const SparseVector> points, std::span<const double> point_sq_norms,
                    const DenseRows& centroids, std::span<const double> centroid_sq_norms,
                    std::span<int> assignment, std::span<double> sq_distance);

void accumulate_centroids(std::span<const SparseVector> points, std::span<const int> assignment,
                          std::size_t k, std::size_t dim, std::span<double> sums,
                          std::span<std::size_t> counts);

}  // namespace serial
}  // namespace llmrs::kernels

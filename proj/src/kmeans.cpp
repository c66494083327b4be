#include "llmrs/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "json.hpp"
#include "llmrs/error.hpp"
#include "llmrs/kernels.hpp"

namespace llmrs {
namespace {

// Uniform [0, 1) from the top 53 bits; std distributions are not portable bit-for-bit.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void set_dense(const SparseVector& p, std::span<double> row) {
  std::fill(row.begin(), row.end(), 0.0);
  for (std::size_t j = 0; j < p.indices.size(); ++j) row[p.indices[j]] = p.values[j];
}

double sq_distance(const SparseVector& x, double x_sq, std::span<const double> c, double c_sq) {
  return std::max(0.0, x_sq - 2.0 * kernels::dot(x, c) + c_sq);
}

std::vector<double> row_sq_norms(const std::vector<double>& centroids, std::size_t k, std::size_t dim) {
  std::vector<double> out(k);
  for (std::size_t c = 0; c < k; ++c) {
    std::span<const double> row(centroids.data() + c * dim, dim);
    out[c] = kernels::dot(row, row);
  }
  return out;
}

void seed_plus_plus(std::span<const SparseVector> points, std::span<const double> x_sq, std::size_t k,
                    std::size_t dim, std::mt19937_64& rng, std::vector<double>& centroids) {
  const std::size_t n = points.size();
  centroids.assign(k * dim, 0.0);
  auto first = std::min(n - 1, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)));
  set_dense(points[first], {centroids.data(), dim});

  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) {
    d2[i] = sq_distance(points[i], x_sq[i], {centroids.data(), dim}, x_sq[first]);
  }
  for (std::size_t c = 1; c < k; ++c) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    if (!(total > 0.0)) throw validation_error("kmeans: fewer distinct points than k=" + std::to_string(k));
    const double target = uniform01(rng) * total;
    std::size_t pick = n;
    double cumulative = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (d2[i] <= 0.0) continue;
      cumulative += d2[i];
      pick = i;
      if (cumulative > target) break;
    }
    std::span<double> row(centroids.data() + c * dim, dim);
    set_dense(points[pick], row);
    const double c_sq = x_sq[pick];
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], sq_distance(points[i], x_sq[i], row, c_sq));
  }
}

}  // namespace

ClusterModel kmeans(std::span<const SparseVector> points, std::size_t dim, const KMeansOptions& options) {
  const std::size_t k = options.k;
  const std::size_t n = points.size();
  if (k == 0) throw validation_error("kmeans: k must be >= 1");
  if (n < k) throw validation_error("kmeans: fewer points than k=" + std::to_string(k));
  for (const auto& p : points) {
    if (!p.empty() && p.indices.back() >= dim) throw validation_error("kmeans: point index outside dimension");
  }

  std::vector<double> x_sq(n);
  for (std::size_t i = 0; i < n; ++i) x_sq[i] = points[i].squared_norm();

  ClusterModel model;
  model.k = k;
  model.dim = dim;
  model.seed = options.seed;
  std::mt19937_64 rng(options.seed);
  seed_plus_plus(points, x_sq, k, dim, rng, model.centroids);

  auto assign = options.parallel ? &kernels::assign_nearest : &kernels::serial::assign_nearest;
  auto accumulate = options.parallel ? &kernels::accumulate_centroids : &kernels::serial::accumulate_centroids;

  model.assignments.assign(n, 0);
  std::vector<double> dist(n);
  std::vector<double> sums(k * dim);
  std::vector<std::size_t> counts(k);
  auto c_sq = row_sq_norms(model.centroids, k, dim);

  for (std::size_t iter = 0; iter < options.max_iters; ++iter) {
    assign(points, x_sq, {model.centroids, dim}, c_sq, model.assignments, dist);

    std::fill(counts.begin(), counts.end(), 0);
    for (int a : model.assignments) ++counts[a];
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      std::size_t far = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[model.assignments[i]] > 1 && (far == n || dist[i] > dist[far])) far = i;
      }
      --counts[model.assignments[far]];
      model.assignments[far] = static_cast<int>(c);
      ++counts[c];
      dist[far] = 0.0;
      set_dense(points[far], {model.centroids.data() + c * dim, dim});
    }
    model.sse_history.push_back(std::accumulate(dist.begin(), dist.end(), 0.0));

    accumulate(points, model.assignments, k, dim, sums, counts);
    double movement = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      const double inv = 1.0 / static_cast<double>(counts[c]);
      double shift = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        const double updated = sums[c * dim + j] * inv;
        const double delta = updated - model.centroids[c * dim + j];
        shift += delta * delta;
        model.centroids[c * dim + j] = updated;
      }
      movement = std::max(movement, std::sqrt(shift));
    }
    c_sq = row_sq_norms(model.centroids, k, dim);
    ++model.iterations_run;
    if (movement < options.tol) break;
  }

  // Final assignment against the final centroids.
  assign(points, x_sq, {model.centroids, dim}, c_sq, model.assignments, dist);
  model.final_sse = std::accumulate(dist.begin(), dist.end(), 0.0);
  model.sse_history.push_back(model.final_sse);
  return model;
}

SentimentLabel label_review(const SentimentScore& score) {
  return score.pos > score.neg ? SentimentLabel::kPositive : SentimentLabel::kNegative;
}

double cluster_rate(std::size_t positive, std::size_t negative) {
  if (positive + negative == 0) throw validation_error("cluster_rate: cluster has no labeled reviews");
  return static_cast<double>(positive) / static_cast<double>(positive + negative);
}

std::vector<int> assign_cluster_ratings(std::span<const double> rates) {
  std::vector<std::size_t> order(rates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rates[a] < rates[b]; });
  std::vector<int> ratings(rates.size());
  for (std::size_t rank = 0; rank < order.size(); ++rank) ratings[order[rank]] = static_cast<int>(rank + 1);
  return ratings;
}

std::vector<ClusterStats> cluster_stats(std::span<const int> assignments,
                                        std::span<const SentimentLabel> labels, std::size_t k) {
  std::vector<ClusterStats> stats(k);
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    auto& s = stats.at(static_cast<std::size_t>(assignments[i]));
    (labels[i] == SentimentLabel::kPositive ? s.positive : s.negative) += 1;
  }
  std::vector<double> rates(k);
  for (std::size_t c = 0; c < k; ++c) rates[c] = stats[c].rate = cluster_rate(stats[c].positive, stats[c].negative);
  auto ratings = assign_cluster_ratings(rates);
  for (std::size_t c = 0; c < k; ++c) stats[c].rating = ratings[c];
  return stats;
}

int median_cluster_rating(std::size_t k) { return static_cast<int>(k / 2 + 1); }

std::optional<int> consistent_rating(std::span<const int> review_ratings) {
  if (review_ratings.empty()) return std::nullopt;
  long long sum = 0;
  for (int r : review_ratings) sum += r;
  const auto n = static_cast<long long>(review_ratings.size());
  // floor(sum / n + 1/2) in integers
  return static_cast<int>((2 * sum + n) / (2 * n));
}

void save_clusters(const std::filesystem::path& path, const ClusterModel& model,
                   std::span<const ClusterStats> stats, std::span<const std::string> review_ids) {
  using nlohmann::json;
  json per_cluster = json::array();
  for (std::size_t c = 0; c < stats.size(); ++c) {
    per_cluster.push_back({{"index", c},
                           {"x_p", stats[c].positive},
                           {"x_n", stats[c].negative},
                           {"Y", stats[c].rate},
                           {"rating", stats[c].rating}});
  }
  json assignments = json::object();
  for (std::size_t i = 0; i < review_ids.size(); ++i) assignments[review_ids[i]] = model.assignments[i];
  json doc = {{"k", model.k},
              {"seed", model.seed},
              {"iterations_run", model.iterations_run},
              {"final_sse", model.final_sse},
              {"per_cluster", std::move(per_cluster)},
              {"assignments", std::move(assignments)}};
  std::ofstream out(path);
  if (!out) throw io_error("cannot write " + path.string());
  out << doc.dump() << '\n';
}

}  // namespace llmrs

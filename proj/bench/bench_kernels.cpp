// Serial reference vs OpenMP kernels.

#include <benchmark/benchmark.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "llmrs/kernels.hpp"
#include "llmrs/kmeans.hpp"

using namespace llmrs;

namespace {

std::vector<double> random_rows(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> v(n * dim);
  for (auto& x : v) x = normal(rng);
  return v;
}

// Sparse, unit-norm rows shaped like review TF-IDF vectors.
std::vector<SparseVector> sparse_points(std::size_t n, std::size_t dim, std::size_t nnz, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<SparseVector> out(n);
  for (auto& p : out) {
    std::vector<std::uint32_t> idx;
    while (idx.size() < nnz) {
      auto j = static_cast<std::uint32_t>(rng() % dim);
      if (std::find(idx.begin(), idx.end(), j) == idx.end()) idx.push_back(j);
    }
    std::sort(idx.begin(), idx.end());
    p.indices = idx;
    p.values.assign(nnz, 1.0 / std::sqrt(static_cast<double>(nnz)));
  }
  return out;
}

template <bool Parallel>
void BM_CosineScan(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0)), dim = 384;
  auto data = random_rows(n, dim, 1);
  std::vector<double> norms(n);
  kernels::DenseRows rows{data, dim};
  for (std::size_t i = 0; i < n; ++i) norms[i] = kernels::l2_norm(rows.row(i));
  std::vector<std::uint32_t> subset(n);
  std::iota(subset.begin(), subset.end(), 0u);
  auto query = random_rows(1, dim, 2);
  const double qn = kernels::l2_norm(query);
  std::vector<double> out(n);
  for (auto _ : state) {
    if constexpr (Parallel) kernels::cosine_scan(query, qn, rows, norms, subset, out);
    else kernels::serial::cosine_scan(query, qn, rows, norms, subset, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

template <bool Parallel>
void BM_AssignNearest(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0)), dim = 5000, k = 5;
  auto points = sparse_points(n, dim, 20, 3);
  std::vector<double> sq(n, 1.0);
  auto centroids = random_rows(k, dim, 4);
  std::vector<double> csq(k);
  kernels::DenseRows crows{centroids, dim};
  for (std::size_t c = 0; c < k; ++c) csq[c] = kernels::dot(crows.row(c), crows.row(c));
  std::vector<int> assignment(n);
  std::vector<double> dist(n);
  for (auto _ : state) {
    if constexpr (Parallel) kernels::assign_nearest(points, sq, crows, csq, assignment, dist);
    else kernels::serial::assign_nearest(points, sq, crows, csq, assignment, dist);
    benchmark::DoNotOptimize(dist.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

template <bool Parallel>
void BM_KMeans(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0)), dim = 2000;
  auto points = sparse_points(n, dim, 15, 5);
  for (auto _ : state) {
    auto model = kmeans(points, dim, {.k = 5, .seed = 42, .max_iters = 20, .parallel = Parallel});
    benchmark::DoNotOptimize(model.final_sse);
  }
}

}  // namespace

BENCHMARK(BM_CosineScan<false>)->Name("cosine_scan/serial")->Arg(3605)->Arg(50000);
BENCHMARK(BM_CosineScan<true>)->Name("cosine_scan/omp")->Arg(3605)->Arg(50000);
BENCHMARK(BM_AssignNearest<false>)->Name("assign_nearest/serial")->Arg(20000)->Arg(140000);
BENCHMARK(BM_AssignNearest<true>)->Name("assign_nearest/omp")->Arg(20000)->Arg(140000);
BENCHMARK(BM_KMeans<false>)->Name("kmeans/serial")->Arg(5000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KMeans<true>)->Name("kmeans/omp")->Arg(5000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

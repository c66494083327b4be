#include <gtest/gtest.h>
#include <omp.h>

#include <numeric>
#include <random>

#include "llmrs/kernels.hpp"
#include "support/fixtures.hpp"

namespace llmrs {
namespace {

class KernelsParity : public ::testing::Test {
 protected:
  void SetUp() override {
    saved_threads_ = omp_get_max_threads();
    omp_set_num_threads(4);
  }
  void TearDown() override { omp_set_num_threads(saved_threads_); }

 private:
  int saved_threads_ = 1;
};

TEST(Kernels, DotAndNorm) {
  std::vector<double> a = {3, 4}, b = {1, 2};
  EXPECT_EQ(kernels::dot(a, b), 11.0);
  EXPECT_EQ(kernels::l2_norm(a), 5.0);
  auto s = testing::dense_to_sparse({0, 2, 0, 1});
  std::vector<double> dense = {9, 3, 9, 5};
  EXPECT_EQ(kernels::dot(s, dense), 11.0);
}

TEST_F(KernelsParity, CosineScanBitIdentical) {
  std::mt19937_64 rng(21);
  const std::size_t dim = 24, n = 5000;
  std::vector<double> data, norms;
  for (std::size_t i = 0; i < n; ++i) {
    auto v = testing::random_vector(rng, dim);
    data.insert(data.end(), v.begin(), v.end());
    norms.push_back(kernels::l2_norm(v));
  }
  kernels::DenseRows rows{data, dim};
  std::vector<std::uint32_t> subset(n);
  std::iota(subset.begin(), subset.end(), 0u);
  std::shuffle(subset.begin(), subset.end(), rng);
  subset.resize(3000);
  auto q = testing::random_vector(rng, dim);
  std::vector<double> par(subset.size()), ser(subset.size());
  kernels::cosine_scan(q, kernels::l2_norm(q), rows, norms, subset, par);
  kernels::serial::cosine_scan(q, kernels::l2_norm(q), rows, norms, subset, ser);
  EXPECT_EQ(par, ser);
  for (double s : par) {
    EXPECT_GE(s, -1.0);
    EXPECT_LE(s, 1.0);
  }
}

TEST_F(KernelsParity, AssignAndAccumulateBitIdentical) {
  std::mt19937_64 rng(22);
  const std::size_t dim = 40, n = 3000, k = 7;
  std::vector<SparseVector> points;
  std::vector<double> sq;
  for (std::size_t i = 0; i < n; ++i) {
    auto v = testing::random_vector(rng, dim);
    for (auto& x : v)
      if (rng() % 3) x = 0.0;
    points.push_back(testing::dense_to_sparse(v));
    sq.push_back(points.back().squared_norm());
  }
  std::vector<double> centroids, csq;
  for (std::size_t c = 0; c < k; ++c) {
    auto v = testing::random_vector(rng, dim);
    centroids.insert(centroids.end(), v.begin(), v.end());
    csq.push_back(kernels::dot(v, v));
  }
  kernels::DenseRows crows{centroids, dim};
  std::vector<int> a1(n), a2(n);
  std::vector<double> d1(n), d2(n);
  kernels::assign_nearest(points, sq, crows, csq, a1, d1);
  kernels::serial::assign_nearest(points, sq, crows, csq, a2, d2);
  EXPECT_EQ(a1, a2);
  EXPECT_EQ(d1, d2);

  std::vector<double> s1(k * dim), s2(k * dim);
  std::vector<std::size_t> c1(k), c2(k);
  kernels::accumulate_centroids(points, a1, k, dim, s1, c1);
  kernels::serial::accumulate_centroids(points, a1, k, dim, s2, c2);
  EXPECT_EQ(s1, s2);
  EXPECT_EQ(c1, c2);
  EXPECT_EQ(std::accumulate(c1.begin(), c1.end(), std::size_t{0}), n);
}

TEST(Kernels, AssignTieGoesToLowerIndex) {
  std::vector<SparseVector> points = {testing::dense_to_sparse({1, 0})};
  std::vector<double> sq = {1.0};
  std::vector<double> centroids = {0, 1, 0, -1};  // both at distance sqrt(2)
  std::vector<double> csq = {1, 1};
  std::vector<int> a(1);
  std::vector<double> d(1);
  kernels::assign_nearest(points, sq, {centroids, 2}, csq, a, d);
  EXPECT_EQ(a[0], 0);
  EXPECT_DOUBLE_EQ(d[0], 2.0);
}

}  // namespace
}  // namespace llmrs

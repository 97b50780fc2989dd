#include <mkrum/core.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace mkrum;

namespace {

Matrix<double> random_points(Index n, Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix<double> pts(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < d; ++k) pts(i, k) = normal(rng);
  return pts;
}

IndexSubset random_subset(Index n, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  std::vector<Index> idx;
  for (Index i = 0; i < n; ++i)
    if (coin(rng)) idx.push_back(i);
  if (idx.empty()) idx.push_back(std::uniform_int_distribution<Index>(0, n - 1)(rng));
  return IndexSubset(idx);
}

// Plain-loop oracles, independent of Eigen expressions.
double naive_sqdist(const Matrix<double>& pts, Index i, Index j) {
  double s = 0.0;
  for (Index k = 0; k < pts.cols(); ++k) s += (pts(i, k) - pts(j, k)) * (pts(i, k) - pts(j, k));
  return s;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST(IndexSubset, RejectsUnsortedAndDuplicates) {
  EXPECT_THROW(IndexSubset({2, 1}), InvalidArgument);
  EXPECT_THROW(IndexSubset({1, 1}), InvalidArgument);
  EXPECT_THROW(IndexSubset({-1}), InvalidArgument);
  EXPECT_EQ(IndexSubset::from_unsorted({3, 0, 2}), IndexSubset({0, 2, 3}));
  EXPECT_THROW(IndexSubset::from_unsorted({3, 3}), InvalidArgument);
}

TEST(PointCloud, RejectsNonFiniteAndEmpty) {
  Matrix<double> pts(2, 1);
  pts << 0.0, std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(PointCloud<double>{pts}, InvalidArgument);
  pts << 0.0, std::numeric_limits<double>::infinity();
  EXPECT_THROW(PointCloud<double>{pts}, InvalidArgument);
  EXPECT_THROW(PointCloud<double>{Matrix<double>(0, 2)}, InvalidArgument);
  EXPECT_THROW(PointCloud<double>{Matrix<double>(2, 0)}, InvalidArgument);
}

TEST(SubsetMean, Singleton) {
  Matrix<double> pts(1, 2);
  pts << 2.0, 3.0;
  const auto mean = subset_mean(PointCloud<double>(pts), IndexSubset{0});
  EXPECT_EQ(mean(0), 2.0);
  EXPECT_EQ(mean(1), 3.0);
}

TEST(SubsetMean, KrumEvenConstruction) {
  // n=4, f=1: x1 = e, x2 = x3 = x4 = 0; S = first three points.
  const auto cloud = PointCloud<double>::line({1.0, 0.0, 0.0, 0.0});
  EXPECT_NEAR(subset_mean(cloud, IndexSubset{0, 1, 2})(0), 1.0 / 3.0, 1e-15);
}

TEST(SubsetMean, MatchesNaiveLoop) {
  std::mt19937_64 rng(1);
  const Matrix<double> pts = random_points(5, 3, rng);
  const auto mean = subset_mean(PointCloud<double>(pts), IndexSubset::range(0, 5));
  for (Index k = 0; k < 3; ++k) {
    double s = 0.0;
    for (Index i = 0; i < 5; ++i) s += pts(i, k);
    EXPECT_NEAR(mean(k), s / 5.0, 1e-15);
  }
}

TEST(SubsetMean, Errors) {
  const auto cloud = PointCloud<double>::line({0.0, 1.0});
  EXPECT_THROW(subset_mean(cloud, IndexSubset{}), InvalidArgument);
  EXPECT_THROW(subset_mean(cloud, IndexSubset{0, 2}), InvalidArgument);
  EXPECT_THROW(subset_scatter(cloud, IndexSubset{}), InvalidArgument);
}

TEST(SubsetScatter, EqualPointsIsZero) {
  const auto cloud = PointCloud<double>::line({4.0, 4.0, 4.0});
  EXPECT_EQ(subset_scatter(cloud, IndexSubset::range(0, 3)), 0.0);
}

TEST(SubsetScatter, KrumEvenConstruction) {
  // (n-2)(n-2f+2)/(4(n-f)^2) at n=4, f=1 is 2/9.
  const auto cloud = PointCloud<double>::line({1.0, 0.0, 0.0, 0.0});
  EXPECT_NEAR(subset_scatter(cloud, IndexSubset{0, 1, 2}), 2.0 / 9.0, 1e-15);
}

TEST(SubsetScatter, ThreeClusterConstruction) {
  // f(n-2f)/(n-f)^2 at n=7, f=2 is 6/25.
  const auto cloud = PointCloud<double>::line({-1, -1, 0, 0, 0, 1, 1});
  EXPECT_NEAR(subset_scatter(cloud, IndexSubset::range(0, 5)), 6.0 / 25.0, 1e-15);
}

TEST(PairwiseSqdist, UnitDistance) {
  const auto dist = pairwise_sqdist(PointCloud<double>::line({0.0, 1.0}));
  EXPECT_EQ(dist(0, 0), 0.0);
  EXPECT_EQ(dist(0, 1), 1.0);
  EXPECT_EQ(dist(1, 0), 1.0);
  EXPECT_EQ(dist(1, 1), 0.0);
}

TEST(PairwiseSqdist, MatchesPerPairLoop) {
  std::mt19937_64 rng(2);
  const Matrix<double> pts = random_points(6, 3, rng);
  const auto dist = pairwise_sqdist(PointCloud<double>(pts));
  for (Index i = 0; i < 6; ++i) {
    EXPECT_EQ(dist(i, i), 0.0);
    for (Index j = 0; j < 6; ++j) {
      EXPECT_EQ(dist(i, j), dist(j, i));
      EXPECT_NEAR(dist(i, j), naive_sqdist(pts, i, j), 1e-13);
    }
  }
}

TEST(CrossIdentity, DegenerateAndTwoPoint) {
  const auto same = PointCloud<double>::line({3.0, 3.0, 3.0});
  const auto id = cross_identity_eval(same, IndexSubset{0, 1, 2}, IndexSubset{0, 1, 2});
  EXPECT_EQ(id.lhs, 0.0);
  EXPECT_EQ(id.rhs, 0.0);

  const auto two = PointCloud<double>::line({0.0, 1.0});
  const auto id2 = cross_identity_eval(two, IndexSubset{0}, IndexSubset{1});
  EXPECT_DOUBLE_EQ(id2.lhs, 1.0);
  EXPECT_DOUBLE_EQ(id2.rhs, 1.0);
}

TEST(CrossIdentity, RandomInstancesAgainstDoubleLoop) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 1000; ++t) {
    const Index n = std::uniform_int_distribution<Index>(1, 30)(rng);
    const Index d = std::uniform_int_distribution<Index>(1, 5)(rng);
    const Matrix<double> pts = random_points(n, d, rng);
    const PointCloud<double> cloud(pts);
    const IndexSubset a = random_subset(n, rng), b = random_subset(n, rng);

    double oracle = 0.0;
    for (Index i : a)
      for (Index j : b) oracle += naive_sqdist(pts, i, j);
    oracle /= static_cast<double>(a.size() * b.size());

    const auto id = cross_identity_eval(cloud, a, b);
    ASSERT_LE(rel_err(id.lhs, oracle), 1e-12) << "trial " << t;
    ASSERT_LE(std::abs(id.lhs - id.rhs), 1e-9 * std::max(1.0, id.lhs)) << "trial " << t;
  }
}

TEST(ScatterProperties, PairwiseTranslationScaling) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  for (int t = 0; t < 200; ++t) {
    const Index n = std::uniform_int_distribution<Index>(1, 20)(rng);
    const Index d = std::uniform_int_distribution<Index>(1, 4)(rng);
    const Matrix<double> pts = random_points(n, d, rng);
    const PointCloud<double> cloud(pts);
    const IndexSubset a = random_subset(n, rng);
    const double scatter = subset_scatter(cloud, a);

    double pair_sum = 0.0;
    for (Index i : a)
      for (Index j : a) pair_sum += naive_sqdist(pts, i, j);
    const auto sz = static_cast<double>(a.size());
    EXPECT_LE(rel_err(scatter, pair_sum / (2.0 * sz * sz)), 1e-9);

    Eigen::RowVectorXd shift(d);
    for (Index k = 0; k < d; ++k) shift(k) = normal(rng);
    const Matrix<double> shifted = pts.rowwise() + shift;
    EXPECT_NEAR(subset_scatter(PointCloud<double>(shifted), a), scatter, 1e-9);

    const double c = 0.1 + 3.0 * std::abs(normal(rng));
    EXPECT_LE(rel_err(subset_scatter(PointCloud<double>(c * pts), a), c * c * scatter), 1e-9);
  }
}

TEST(CoreTemplates, FloatScalar) {
  const auto cloud = PointCloud<float>::line({-1, -1, 0, 0, 0, 1, 1});
  EXPECT_NEAR(subset_scatter(cloud, IndexSubset::range(0, 5)), 6.0f / 25.0f, 1e-6f);
}

#pragma once

#include <mkrum/errors.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

namespace mkrum {

using Index = Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Sorted set of distinct 0-based point indices.
class IndexSubset {
 public:
  IndexSubset() = default;

  explicit IndexSubset(std::vector<Index> indices) : indices_(std::move(indices)) {
    for (std::size_t k = 0; k < indices_.size(); ++k) {
      if (indices_[k] < 0)
        throw InvalidArgument("IndexSubset: negative index");
      if (k > 0 && indices_[k] <= indices_[k - 1])
        throw InvalidArgument("IndexSubset: indices must be strictly increasing");
    }
  }

  IndexSubset(std::initializer_list<Index> indices)
      : IndexSubset(std::vector<Index>(indices)) {}

  /// Sorts first; duplicates are still rejected.
  static IndexSubset from_unsorted(std::vector<Index> indices) {
    std::sort(indices.begin(), indices.end());
    return IndexSubset(std::move(indices));
  }

  /// {first, ..., last-1}
  static IndexSubset range(Index first, Index last) {
    std::vector<Index> out;
    for (Index i = first; i < last; ++i) out.push_back(i);
    return IndexSubset(std::move(out));
  }

  Index size() const { return static_cast<Index>(indices_.size()); }
  bool empty() const { return indices_.empty(); }
  Index operator[](Index k) const { return indices_[static_cast<std::size_t>(k)]; }
  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }
  const std::vector<Index>& indices() const { return indices_; }

  bool contains(Index i) const {
    return std::binary_search(indices_.begin(), indices_.end(), i);
  }

  void check_nonempty_within(Index n) const {
    if (indices_.empty())
      throw InvalidArgument("IndexSubset: subset must be nonempty");
    if (indices_.back() >= n)
      throw InvalidArgument("IndexSubset: index " + std::to_string(indices_.back()) +
                            " out of range for n=" + std::to_string(n));
  }

  friend bool operator==(const IndexSubset&, const IndexSubset&) = default;

 private:
  std::vector<Index> indices_;
};

inline Index intersection_size(const IndexSubset& a, const IndexSubset& b) {
  Index count = 0;
  for (Index i : a)
    if (b.contains(i)) ++count;
  return count;
}

/// n points in R^d stored as the rows of an n-by-d matrix. Entries are finite.
template <typename Scalar = double>
class PointCloud {
 public:
  using MatrixType = Matrix<Scalar>;
  using VectorType = Vector<Scalar>;

  explicit PointCloud(MatrixType points) : points_(std::move(points)) {
    if (points_.rows() < 1 || points_.cols() < 1)
      throw InvalidArgument("PointCloud: need n >= 1 and d >= 1");
    if (!points_.allFinite())
      throw InvalidArgument("PointCloud: entries must be finite");
  }

  /// Builds a 1-D cloud from scalar coordinates.
  static PointCloud line(const std::vector<Scalar>& coords) {
    MatrixType pts(static_cast<Index>(coords.size()), 1);
    for (std::size_t i = 0; i < coords.size(); ++i) pts(static_cast<Index>(i), 0) = coords[i];
    return PointCloud(std::move(pts));
  }

  Index n() const { return points_.rows(); }
  Index d() const { return points_.cols(); }
  const MatrixType& points() const { return points_; }
  auto point(Index i) const { return points_.row(i).transpose(); }

 private:
  MatrixType points_;
};

template <typename Scalar>
Vector<Scalar> subset_mean(const PointCloud<Scalar>& cloud, const IndexSubset& subset) {
  subset.check_nonempty_within(cloud.n());
  Vector<Scalar> sum = Vector<Scalar>::Zero(cloud.d());
  for (Index i : subset) sum += cloud.point(i);
  return sum / static_cast<Scalar>(subset.size());
}

/// Mean squared deviation of the subset from its own mean.
template <typename Scalar>
Scalar subset_scatter(const PointCloud<Scalar>& cloud, const IndexSubset& subset) {
  const Vector<Scalar> mean = subset_mean(cloud, subset);
  Scalar total(0);
  for (Index i : subset) total += (cloud.point(i) - mean).squaredNorm();
  return total / static_cast<Scalar>(subset.size());
}

/// Full n-by-n matrix of squared Euclidean distances.
template <typename Scalar>
Matrix<Scalar> pairwise_sqdist(const PointCloud<Scalar>& cloud) {
  const Index n = cloud.n();
  Matrix<Scalar> dist = Matrix<Scalar>::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const Scalar d2 = (cloud.point(i) - cloud.point(j)).squaredNorm();
      dist(i, j) = d2;
      dist(j, i) = d2;
    }
  }
  return dist;
}

template <typename Scalar>
struct CrossIdentity {
  Scalar lhs;  // average cross squared distance
  Scalar rhs;  // squared mean gap plus both scatters
};

/// Both sides of the cross-sum identity
///   (1/ab) sum_{i in A, j in B} |x_i - x_j|^2 = |mean_A - mean_B|^2 + scatter_A + scatter_B.
template <typename Scalar>
CrossIdentity<Scalar> cross_identity_eval(const PointCloud<Scalar>& cloud, const IndexSubset& a,
                                          const IndexSubset& b) {
  a.check_nonempty_within(cloud.n());
  b.check_nonempty_within(cloud.n());
  Scalar cross(0);
  for (Index i : a)
    for (Index j : b) cross += (cloud.point(i) - cloud.point(j)).squaredNorm();
  cross /= static_cast<Scalar>(a.size()) * static_cast<Scalar>(b.size());
  const Scalar rhs = (subset_mean(cloud, a) - subset_mean(cloud, b)).squaredNorm() +
                     subset_scatter(cloud, a) + subset_scatter(cloud, b);
  return {cross, rhs};
}

}  // namespace mkrum

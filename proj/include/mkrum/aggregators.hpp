#pragma once

// Krum-family selection and the baseline rules it is compared against.
//
// Scores include the query point itself when it belongs to the cloud and are
// normalized by 1/(n-f). The original Krum formulation excludes the point and
// divides by n-f-1; both select the same indices.
//
// Ties are broken by smaller index everywhere. Score comparison is exact.

#include <mkrum/core.hpp>

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>

namespace mkrum {

struct AggregationParams {
  Index n = 1;
  Index f = 0;
  Index m = 1;

  void validate() const {
    if (n < 1) throw InvalidArgument("n must be >= 1");
    if (f < 0 || f > n - 1) throw InvalidArgument("f must satisfy 0 <= f <= n-1");
    if (m < 1 || m > n) throw InvalidArgument("m must satisfy 1 <= m <= n");
  }

  friend bool operator==(const AggregationParams&, const AggregationParams&) = default;
};

template <typename Scalar>
using ScoreVector = Vector<Scalar>;

template <typename Scalar>
struct SelectionResult {
  IndexSubset selected;
  Vector<Scalar> aggregate;
};

namespace detail {

inline void check_f(Index n, Index f) {
  if (f < 0 || f > n - 1)
    throw InvalidArgument("f=" + std::to_string(f) + " out of range [0, " +
                          std::to_string(n - 1) + "]");
}

/// Positions of the k smallest entries ordered by (value, position).
template <typename Derived>
std::vector<Index> smallest_k(const Eigen::DenseBase<Derived>& values, Index k) {
  std::vector<Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Index{0});
  auto less = [&](Index a, Index b) {
    return values(a) < values(b) || (values(a) == values(b) && a < b);
  };
  std::partial_sort(order.begin(), order.begin() + k, order.end(), less);
  order.resize(static_cast<std::size_t>(k));
  return order;
}

/// Score from one row of squared distances; summed in ascending distance order.
template <typename Derived>
typename Derived::Scalar score_from_distances(const Eigen::DenseBase<Derived>& sqdist, Index keep) {
  using Scalar = typename Derived::Scalar;
  Scalar sum(0);
  for (Index j : smallest_k(sqdist, keep)) sum += sqdist(j);
  return sum / static_cast<Scalar>(keep);
}

template <typename Scalar, typename Derived>
Vector<Scalar> distances_to(const PointCloud<Scalar>& cloud, const Eigen::MatrixBase<Derived>& x) {
  if (x.size() != cloud.d()) throw InvalidArgument("query dimension does not match cloud");
  Vector<Scalar> dist(cloud.n());
  for (Index i = 0; i < cloud.n(); ++i) dist(i) = (x - cloud.point(i)).squaredNorm();
  return dist;
}

}  // namespace detail

/// Indices of the n-f cloud points nearest to x, sorted ascending.
template <typename Scalar, typename Derived>
IndexSubset neighbor_set(const PointCloud<Scalar>& cloud, Index f,
                         const Eigen::MatrixBase<Derived>& x) {
  detail::check_f(cloud.n(), f);
  return IndexSubset::from_unsorted(
      detail::smallest_k(detail::distances_to(cloud, x), cloud.n() - f));
}

/// s(x): mean of the n-f smallest squared distances from x to the cloud.
template <typename Scalar, typename Derived>
Scalar score(const PointCloud<Scalar>& cloud, Index f, const Eigen::MatrixBase<Derived>& x) {
  detail::check_f(cloud.n(), f);
  return detail::score_from_distances(detail::distances_to(cloud, x), cloud.n() - f);
}

template <typename Scalar>
ScoreVector<Scalar> score_all(const PointCloud<Scalar>& cloud, Index f) {
  detail::check_f(cloud.n(), f);
  const Matrix<Scalar> dist = pairwise_sqdist(cloud);
  ScoreVector<Scalar> scores(cloud.n());
  for (Index i = 0; i < cloud.n(); ++i)
    scores(i) = detail::score_from_distances(dist.row(i), cloud.n() - f);
  return scores;
}

template <typename Derived>
IndexSubset select_smallest(const Eigen::DenseBase<Derived>& scores, Index m) {
  if (m < 1 || m > scores.size())
    throw InvalidArgument("m=" + std::to_string(m) + " out of range [1, " +
                          std::to_string(scores.size()) + "]");
  return IndexSubset::from_unsorted(detail::smallest_k(scores, m));
}

/// m-MultiKrum: average of the m points with smallest scores.
template <typename Scalar>
SelectionResult<Scalar> multikrum(const PointCloud<Scalar>& cloud, Index f, Index m) {
  AggregationParams{cloud.n(), f, m}.validate();
  IndexSubset selected = select_smallest(score_all(cloud, f), m);
  Vector<Scalar> aggregate = subset_mean(cloud, selected);
  return {std::move(selected), std::move(aggregate)};
}

template <typename Scalar>
SelectionResult<Scalar> krum(const PointCloud<Scalar>& cloud, Index f) {
  return multikrum(cloud, f, 1);
}

// ---------------------------------------------------------------------------
// Baselines

enum class BaselineRule { mean, coordinate_median, trimmed_mean, geometric_median };

inline std::string_view to_string(BaselineRule rule) {
  switch (rule) {
    case BaselineRule::mean: return "mean";
    case BaselineRule::coordinate_median: return "coordinate_median";
    case BaselineRule::trimmed_mean: return "trimmed_mean";
    case BaselineRule::geometric_median: return "geometric_median";
  }
  return "unknown";
}

inline std::optional<BaselineRule> parse_baseline_rule(std::string_view name) {
  for (auto rule : {BaselineRule::mean, BaselineRule::coordinate_median,
                    BaselineRule::trimmed_mean, BaselineRule::geometric_median})
    if (to_string(rule) == name) return rule;
  return std::nullopt;
}

template <typename Scalar>
struct BaselineResult {
  Vector<Scalar> aggregate;
  int iterations = 0;
  bool converged = true;
};

namespace detail {

template <typename Scalar>
Vector<Scalar> coordinate_median(const PointCloud<Scalar>& cloud) {
  const Index n = cloud.n();
  Vector<Scalar> out(cloud.d());
  std::vector<Scalar> column(static_cast<std::size_t>(n));
  for (Index k = 0; k < cloud.d(); ++k) {
    for (Index i = 0; i < n; ++i) column[static_cast<std::size_t>(i)] = cloud.points()(i, k);
    std::sort(column.begin(), column.end());
    const auto mid = static_cast<std::size_t>(n / 2);
    out(k) = (n % 2 == 1) ? column[mid] : (column[mid - 1] + column[mid]) / Scalar(2);
  }
  return out;
}

template <typename Scalar>
Vector<Scalar> trimmed_mean(const PointCloud<Scalar>& cloud, Index f) {
  const Index n = cloud.n();
  if (f < 0 || n <= 2 * f) throw InvalidArgument("trimmed_mean requires 0 <= f and 2f < n");
  Vector<Scalar> out(cloud.d());
  std::vector<Scalar> column(static_cast<std::size_t>(n));
  for (Index k = 0; k < cloud.d(); ++k) {
    for (Index i = 0; i < n; ++i) column[static_cast<std::size_t>(i)] = cloud.points()(i, k);
    std::sort(column.begin(), column.end());
    Scalar sum(0);
    for (Index i = f; i < n - f; ++i) sum += column[static_cast<std::size_t>(i)];
    out(k) = sum / static_cast<Scalar>(n - 2 * f);
  }
  return out;
}

// Weiszfeld iteration started at the coordinate-wise median.
template <typename Scalar>
BaselineResult<Scalar> geometric_median(const PointCloud<Scalar>& cloud, Scalar tol,
                                        int max_iter) {
  if (!(tol > Scalar(0))) throw InvalidArgument("geometric_median requires tol > 0");
  if (max_iter < 1) throw InvalidArgument("geometric_median requires max_iter >= 1");
  BaselineResult<Scalar> result{coordinate_median(cloud), 0, false};
  Vector<Scalar>& y = result.aggregate;
  for (int it = 1; it <= max_iter; ++it) {
    result.iterations = it;
    Vector<Scalar> weighted = Vector<Scalar>::Zero(cloud.d());
    Scalar weight_sum(0);
    for (Index i = 0; i < cloud.n(); ++i) {
      const Scalar dist = (cloud.point(i) - y).norm();
      if (dist <= tol) {
        // Iterate sits on a data point: return it.
        y = cloud.point(i);
        result.converged = true;
        return result;
      }
      weighted += cloud.point(i) / dist;
      weight_sum += Scalar(1) / dist;
    }
    Vector<Scalar> next = weighted / weight_sum;
    const Scalar step = (next - y).norm();
    y = std::move(next);
    if (step <= tol) {
      result.converged = true;
      return result;
    }
  }
  return result;
}

}  // namespace detail

template <typename Scalar>
BaselineResult<Scalar> baseline_aggregate(const PointCloud<Scalar>& cloud, BaselineRule rule,
                                          Index f = 0, Scalar tol = Scalar(1e-10),
                                          int max_iter = 1000) {
  switch (rule) {
    case BaselineRule::mean:
      return {cloud.points().colwise().mean().transpose(), 0, true};
    case BaselineRule::coordinate_median:
      return {detail::coordinate_median(cloud), 0, true};
    case BaselineRule::trimmed_mean:
      return {detail::trimmed_mean(cloud, f), 0, true};
    case BaselineRule::geometric_median:
      return detail::geometric_median(cloud, tol, max_iter);
  }
  throw InvalidArgument("unknown baseline rule");
}

}  // namespace mkrum

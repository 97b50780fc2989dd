#pragma once

// Empirical side of the robustness coefficient: the ratio
//   |F_m(X) - mean_S|^2 / scatter_S
// for a given configuration X and honest set S, the explicit worst-case
// constructions, exhaustive maximization over S for small n, and a seeded
// stochastic search for large ratios.

#include <mkrum/aggregators.hpp>
#include <mkrum/bounds.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace mkrum {

using Cloud = PointCloud<double>;

struct Scenario {
  std::string name;
  double epsilon = 0.0;
  AggregationParams params;
  Cloud cloud;
  IndexSubset honest;  // size n-f

  void validate() const;
};

/// ratio = numerator / denominator, with 0/0 = -inf and (positive)/0 = +inf.
struct RatioResult {
  double numerator = 0.0;
  double denominator = 0.0;
  double ratio = 0.0;
};

RatioResult kappa_ratio(const Cloud& cloud, const AggregationParams& params,
                        const IndexSubset& honest);
RatioResult kappa_ratio(const Scenario& scenario);

struct SupResult {
  IndexSubset best_honest;
  double ratio = 0.0;
};

/// Maximizes kappa_ratio over every honest set of size n-f. Ties keep the
/// lexicographically first set. Throws Infeasible when C(n, f) > max_subsets.
SupResult kappa_ratio_sup_S(const Cloud& cloud, const AggregationParams& params,
                            std::uint64_t max_subsets = 1'000'000);

/// Krum lower-bound layout in d=1: floor((n-1)/2) points at 1, the rest at 0.
/// Honest set is the first n-f points; m = 1.
Scenario scenario_krum(Index n, Index f);

/// f points at -1, n-2f at 0, f at 1-epsilon (d=1). Honest set is the first
/// n-f points; m defaults to n-f.
Scenario scenario_three_cluster(Index n, Index f, double epsilon, Index m = -1);

/// Ratio of the three-cluster configuration at averaging size m; the
/// numerical counterpart of appendix_lower_R.
double appendix_configuration_ratio(const ProblemSize& p, Index m, double epsilon);

struct SearchConfig {
  AggregationParams params;
  Index d = 1;
  int restarts = 16;
  int iterations = 500;
  double initial_step = 0.1;       // relative to the honest diameter
  std::uint64_t seed = 0;
  double clip_multiplier = 10.0;   // Byzantine points stay within this many honest diameters
  int threads = 1;
  double construction_epsilon = 1e-9;

  void validate() const;
};

struct SearchResult {
  std::uint64_t seed = 0;
  double best_ratio = 0.0;
  Scenario best_scenario;
  double upper_bound = 0.0;
  int restart_of_best = 0;
  std::int64_t evaluations = 0;

  bool sound() const { return best_ratio <= upper_bound + 1e-9; }
};

/// (1+1) hill climb over the Byzantine coordinates, honest set fixed to the
/// first n-f points. Deterministic for a given config regardless of threads.
/// Throws TheoryViolation if the best ratio exceeds the proven upper bound.
SearchResult search_lower_bound(const SearchConfig& config);

/// Same search without the soundness check.
SearchResult run_search(const SearchConfig& config);

}  // namespace mkrum

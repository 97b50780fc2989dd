#pragma once

// Randomized checks of the identities and inequalities behind the upper
// bound, plus construction-fidelity and bound-ordering sweeps. Failures are
// data in the returned reports, never exceptions.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace mkrum {

struct CheckSuite {
  CheckSuite(std::string name_ = {}) : name(std::move(name_)) {}

  std::string name;
  std::int64_t passed = 0;
  std::int64_t failed = 0;
  std::string first_failure;  // counterexample dump, empty when none

  bool ok() const { return failed == 0; }
};

struct LemmaReport {
  std::vector<CheckSuite> suites;  // cross_identity, selected_scores, distance_control, young, jensen

  bool all_passed() const;
  std::size_t suites_passed() const;
};

/// Draws `trials` random instances (n <= max_n with n > 2f, d <= max_d) and
/// checks each of the five suites on every one. Every 10th cloud is degenerate
/// or integer-valued to exercise ties.
LemmaReport verify_lemmas(int trials, std::uint64_t seed, int max_n = 30, int max_d = 5);

/// Ratio of each explicit construction against its closed form: the Krum
/// layout for 3 <= n <= 60 and the three-cluster layout for n > 3f, n <= 60,
/// plus the named spot values (7,2) and (100,10).
std::vector<CheckSuite> construction_checks();

/// Every lower bound <= every applicable upper bound, n in [5, max_n].
CheckSuite bound_ordering_check(int max_n = 200);

/// The appendix closed form against its own configuration.
struct AppendixComparison {
  std::int64_t n = 0;
  std::int64_t f = 0;
  std::int64_t m = 0;
  double printed = 0.0;
  double configuration = 0.0;
  bool agrees = false;
};

/// Compares on every m in [1, n-f]; agreement within 1e-6 relative.
std::vector<AppendixComparison> appendix_comparison(std::int64_t n, std::int64_t f,
                                                    double epsilon = 1e-10);

}  // namespace mkrum

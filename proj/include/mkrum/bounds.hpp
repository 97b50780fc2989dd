#pragma once

// Closed-form bounds on the robustness coefficient of m-MultiKrum.
//
// Notation: prefactor = (n-f)/(n-2f), C = (sqrt(2)+1)^2.
//   kappa_a(m) = (sqrt(n-2f)/sqrt(m) + sqrt(2) + 1)^2
//   kappa_b(m) = (sqrt(n-2f)/sqrt(m) + sqrt(2f)/sqrt(m) + f/m)^2
// kappa_a and kappa_b are raw factors. kappa_const, kappa_dec and the
// m-dependent upper bound include the prefactor.

#include <mkrum/errors.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace mkrum {

/// (n, f) with n - 2f >= 1 and f >= 0.
struct ProblemSize {
  std::int64_t n;
  std::int64_t f;

  ProblemSize(std::int64_t n_, std::int64_t f_);

  double prefactor() const;
};

/// (sqrt(2)+1)^2 = 3 + 2 sqrt(2)
double optimal_young_constant();

double universal_lower(const ProblemSize& p);
double krum_lower(const ProblemSize& p);
double nf_multikrum_lower(const ProblemSize& p);
double prior_krum_upper(const ProblemSize& p);

double kappa_const(const ProblemSize& p);
double kappa_a(const ProblemSize& p, double m);
double kappa_b(const ProblemSize& p, double m);
double kappa_dec(const ProblemSize& p, std::int64_t m);
double kappa_dec_instance(const ProblemSize& p, std::int64_t m, std::int64_t u);
double multikrum_upper(const ProblemSize& p, std::int64_t m);

/// Appendix lower bound R(n,f,m) evaluated exactly as printed. For m > n-2f
/// this does not match the ratio of its own construction; see
/// adversarial::appendix_configuration_ratio.
double appendix_lower_R(const ProblemSize& p, std::int64_t m);

struct TransitionReport {
  std::int64_t n = 0;
  std::int64_t f = 0;
  double m_dagger_real = 0.0;
  std::optional<std::int64_t> m_dagger_int;  // absent when kappa_b(n-f) >= C
  bool crossing_in_range = false;
  double bracket_low = 0.0;
  double bracket_high = 0.0;
  double A = 0.0;  // sqrt(n-2f) + sqrt(2f)
  double C = 0.0;
};

/// Root of kappa_b(m) = C by bisection (absolute tolerance tol on m), plus the
/// analytic brackets on the root.
TransitionReport transition(const ProblemSize& p, double tol = 1e-9);

struct BoundRow {
  std::int64_t m = 0;
  double upper_thm1 = 0.0;
  double kappa_const = 0.0;
  double kappa_dec = 0.0;
  double kappa_a = 0.0;
  double kappa_b = 0.0;
  std::optional<double> appendix_R;
};

struct BoundReport {
  std::int64_t n = 0;
  std::int64_t f = 0;
  std::vector<BoundRow> rows;  // m = 1 .. n-f
  double universal_lower = 0.0;
  std::optional<double> krum_lower;  // needs n >= 3
  std::optional<double> nf_lower;    // needs n > 3f, f >= 1
  double prior_krum_upper = 0.0;
  double prior_lower = 0.0;
};

BoundReport summary_table(const ProblemSize& p);

}  // namespace mkrum

#include <mkrum/bounds.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace mkrum {

namespace {

void check_m(const ProblemSize& p, std::int64_t m) {
  if (m < 1 || m > p.n - p.f)
    throw InvalidArgument("m=" + std::to_string(m) + " out of range [1, n-f=" +
                          std::to_string(p.n - p.f) + "]");
}

}  // namespace

ProblemSize::ProblemSize(std::int64_t n_, std::int64_t f_) : n(n_), f(f_) {
  if (f < 0) throw InvalidArgument("f must be >= 0");
  if (n - 2 * f < 1)
    throw InvalidArgument("bounds require n - 2f >= 1 (n=" + std::to_string(n) +
                          ", f=" + std::to_string(f) + ")");
}

double ProblemSize::prefactor() const {
  return static_cast<double>(n - f) / static_cast<double>(n - 2 * f);
}

double optimal_young_constant() { return 3.0 + 2.0 * std::sqrt(2.0); }

double universal_lower(const ProblemSize& p) {
  return static_cast<double>(p.f) / static_cast<double>(p.n - 2 * p.f);
}

double krum_lower(const ProblemSize& p) {
  if (p.n < 3) throw InvalidArgument("krum_lower requires n >= 3");
  const auto n = static_cast<double>(p.n);
  const auto f = static_cast<double>(p.f);
  if (p.n % 2 == 0) return (n - 2.0) / (n - 2.0 * f + 2.0);
  return (n - 1.0) / (n - 2.0 * f + 1.0);
}

double nf_multikrum_lower(const ProblemSize& p) {
  if (p.f < 1) throw InvalidArgument("nf_multikrum_lower requires f >= 1");
  if (p.n <= 3 * p.f)
    throw OutOfRegime("nf_multikrum_lower holds only for n > 3f (n=" + std::to_string(p.n) +
                      ", f=" + std::to_string(p.f) + ")");
  return 4.0 * static_cast<double>(p.f) / static_cast<double>(p.n - 2 * p.f);
}

double prior_krum_upper(const ProblemSize& p) { return 6.0 * p.prefactor(); }

double kappa_const(const ProblemSize& p) { return optimal_young_constant() * p.prefactor(); }

double kappa_a(const ProblemSize& p, double m) {
  if (!(m > 0.0)) throw InvalidArgument("kappa_a requires m > 0");
  const double t = std::sqrt(static_cast<double>(p.n - 2 * p.f) / m) + std::sqrt(2.0) + 1.0;
  return t * t;
}

double kappa_b(const ProblemSize& p, double m) {
  if (!(m > 0.0)) throw InvalidArgument("kappa_b requires m > 0");
  const auto f = static_cast<double>(p.f);
  const double sm = std::sqrt(m);
  const double t = std::sqrt(static_cast<double>(p.n - 2 * p.f)) / sm + std::sqrt(2.0 * f) / sm + f / m;
  return t * t;
}

double kappa_dec(const ProblemSize& p, std::int64_t m) {
  check_m(p, m);
  const auto md = static_cast<double>(m);
  return p.prefactor() * (m <= p.f ? kappa_a(p, md) : kappa_b(p, md));
}

double kappa_dec_instance(const ProblemSize& p, std::int64_t m, std::int64_t u) {
  check_m(p, m);
  if (u < 0 || u > std::min(m, p.f))
    throw InvalidArgument("u=" + std::to_string(u) + " out of range [0, min(m,f)]");
  const auto md = static_cast<double>(m);
  const auto ud = static_cast<double>(u);
  const double v = md - ud;
  const double t = std::sqrt(v) + (std::sqrt(2.0 * md) + std::sqrt(ud)) *
                                      std::sqrt(ud / static_cast<double>(p.n - 2 * p.f));
  return static_cast<double>(p.n - p.f) / (md * md) * t * t;
}

double multikrum_upper(const ProblemSize& p, std::int64_t m) {
  check_m(p, m);
  return p.prefactor() * std::min(optimal_young_constant(), kappa_b(p, static_cast<double>(m)));
}

double appendix_lower_R(const ProblemSize& p, std::int64_t m) {
  if (p.f < 1) throw InvalidArgument("appendix_lower_R requires f >= 1");
  if (p.n <= 3 * p.f) throw OutOfRegime("appendix_lower_R holds only for n > 3f");
  check_m(p, m);
  const auto n = static_cast<double>(p.n);
  const auto f = static_cast<double>(p.f);
  const auto md = static_cast<double>(m);
  const double a = static_cast<double>(std::min(m, p.n - 2 * p.f));
  const double bias = (a * f / (n - f) + md - a) / md;
  return (n - f) * (n - f) / (f * (n - 2.0 * f)) * bias * bias;
}

TransitionReport transition(const ProblemSize& p, double tol) {
  if (p.f < 1) throw InvalidArgument("transition requires f >= 1");
  if (!(tol > 0.0)) throw InvalidArgument("transition requires tol > 0");

  TransitionReport report;
  report.n = p.n;
  report.f = p.f;
  const double C = optimal_young_constant();
  const auto f = static_cast<double>(p.f);
  const double A = std::sqrt(static_cast<double>(p.n - 2 * p.f)) + std::sqrt(2.0 * f);
  const double A2 = A * A;
  report.A = A;
  report.C = C;
  report.bracket_low = (A2 + std::sqrt(A2 * A2 + 4.0 * C * f * f)) / (2.0 * C);
  report.bracket_high = (A2 + std::sqrt(A2 * A2 + 2.0 * C * f * f)) / C;

  // kappa_b is strictly decreasing in m and kappa_b(1) > C whenever f >= 1.
  double lo = 1.0;
  double hi = static_cast<double>(p.n);
  while (kappa_b(p, hi) >= C) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (kappa_b(p, mid) >= C)
      lo = mid;
    else
      hi = mid;
  }
  report.m_dagger_real = 0.5 * (lo + hi);

  auto below = [&](std::int64_t m) { return kappa_b(p, static_cast<double>(m)) < C; };
  auto m_int = static_cast<std::int64_t>(std::floor(report.m_dagger_real));
  if (m_int < 1) m_int = 1;
  while (m_int > 1 && below(m_int - 1)) --m_int;
  while (!below(m_int)) ++m_int;
  report.crossing_in_range = m_int <= p.n - p.f;
  if (report.crossing_in_range) report.m_dagger_int = m_int;
  return report;
}

BoundReport summary_table(const ProblemSize& p) {
  BoundReport report;
  report.n = p.n;
  report.f = p.f;
  report.universal_lower = universal_lower(p);
  report.prior_lower = universal_lower(p);
  report.prior_krum_upper = prior_krum_upper(p);
  if (p.n >= 3) report.krum_lower = krum_lower(p);
  const bool appendix_regime = p.f >= 1 && p.n > 3 * p.f;
  if (appendix_regime) report.nf_lower = nf_multikrum_lower(p);

  const double k_const = kappa_const(p);
  for (std::int64_t m = 1; m <= p.n - p.f; ++m) {
    BoundRow row;
    row.m = m;
    row.kappa_const = k_const;
    row.kappa_dec = kappa_dec(p, m);
    row.kappa_a = kappa_a(p, static_cast<double>(m));
    row.kappa_b = kappa_b(p, static_cast<double>(m));
    row.upper_thm1 = multikrum_upper(p, m);
    if (appendix_regime) row.appendix_R = appendix_lower_R(p, m);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace mkrum

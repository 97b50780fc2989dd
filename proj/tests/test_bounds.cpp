#include <mkrum/bounds.hpp>

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

using namespace mkrum;

namespace {

// Frozen with a 40-digit independent evaluation (mpmath findroot / direct formulas).
constexpr double kKappaConst100_10 = 6.556980515339463859803799629471820676782;
constexpr double kKappaDec100_10_90 = 2.617442279482162651089311069941313408531;
constexpr double kMDagger100_10 = 38.72432653590029331406712061106886609728;
constexpr double kBracketLow100_10 = 31.42902338923977150798016638573496096735;
constexpr double kBracketHigh100_10 = 62.31688162814028898657270653895743498675;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(ProblemSize, Validation) {
  EXPECT_THROW(ProblemSize(4, 2), InvalidArgument);
  EXPECT_THROW(ProblemSize(5, -1), InvalidArgument);
  EXPECT_NO_THROW(ProblemSize(5, 2));
  EXPECT_NO_THROW(ProblemSize(1, 0));
}

TEST(UniversalLower, Values) {
  EXPECT_DOUBLE_EQ(universal_lower({100, 10}), 0.125);
  EXPECT_EQ(universal_lower({9, 0}), 0.0);
  EXPECT_DOUBLE_EQ(universal_lower({7, 2}), 2.0 / 3.0);
}

TEST(KrumLower, EvenOddBranches) {
  EXPECT_DOUBLE_EQ(krum_lower({100, 10}), 98.0 / 82.0);
  EXPECT_NEAR(krum_lower({100, 10}), 1.195122, 1e-6);
  EXPECT_DOUBLE_EQ(krum_lower({11, 2}), 1.25);
  EXPECT_DOUBLE_EQ(krum_lower({4, 1}), 0.5);
  EXPECT_THROW(krum_lower({2, 0}), InvalidArgument);
}

TEST(NfMultikrumLower, RegimeAndValues) {
  EXPECT_DOUBLE_EQ(nf_multikrum_lower({7, 2}), 8.0 / 3.0);
  EXPECT_DOUBLE_EQ(nf_multikrum_lower({100, 10}), 0.5);
  EXPECT_DOUBLE_EQ(nf_multikrum_lower({10, 2}), 8.0 / 6.0);
  EXPECT_THROW(nf_multikrum_lower({6, 2}), OutOfRegime);
  EXPECT_THROW(nf_multikrum_lower({5, 2}), OutOfRegime);
  EXPECT_THROW(nf_multikrum_lower({5, 0}), InvalidArgument);
}

TEST(KappaConst, Values) {
  EXPECT_NEAR(kappa_const({100, 10}), kKappaConst100_10, 1e-12);
  EXPECT_NEAR(kappa_const({100, 10}), 6.556980, 1e-6);
  EXPECT_NEAR(kappa_const({17, 0}), 5.828427, 1e-6);
  EXPECT_LT(kappa_const({100, 10}), prior_krum_upper({100, 10}));
  EXPECT_DOUBLE_EQ(prior_krum_upper({100, 10}), 6.75);
}

TEST(KappaDec, Values) {
  EXPECT_NEAR(kappa_dec({100, 10}, 90), kKappaDec100_10_90, 1e-12);
  EXPECT_NEAR(kappa_dec({100, 10}, 90), 2.617444, 1e-5);
  // Direct evaluation of the b-branch.
  const double t = std::sqrt(80.0 / 90.0) + std::sqrt(20.0 / 90.0) + 1.0 / 9.0;
  EXPECT_NEAR(kappa_dec({100, 10}, 90), 1.125 * t * t, 1e-13);
}

TEST(KappaDec, BranchContinuityAtF) {
  const ProblemSize p(100, 10);
  const double expected = std::pow(std::sqrt(80.0 / 10.0) + std::sqrt(2.0) + 1.0, 2);
  EXPECT_NEAR(kappa_b(p, 10.0), expected, 1e-12);
  EXPECT_NEAR(kappa_a(p, 10.0), expected, 1e-12);
  EXPECT_NEAR(kappa_dec(p, 10), p.prefactor() * expected, 1e-12);
}

TEST(KappaDec, NoAdversaryCollapses) {
  const ProblemSize p(12, 0);
  for (std::int64_t m = 1; m <= 12; ++m) EXPECT_NEAR(kappa_b(p, m), 12.0 / m, 1e-13);
}

TEST(KappaDec, RangeErrors) {
  EXPECT_THROW(kappa_dec({10, 2}, 0), InvalidArgument);
  EXPECT_THROW(kappa_dec({10, 2}, 9), InvalidArgument);
  EXPECT_THROW(multikrum_upper({10, 2}, 9), InvalidArgument);
}

TEST(KappaDecInstance, NoByzantineSelected) {
  for (std::int64_t m = 1; m <= 90; ++m)
    EXPECT_NEAR(kappa_dec_instance({100, 10}, m, 0), 90.0 / m, 1e-12);
  EXPECT_THROW(kappa_dec_instance({100, 10}, 5, 6), InvalidArgument);
  EXPECT_THROW(kappa_dec_instance({100, 10}, 50, 11), InvalidArgument);
  EXPECT_THROW(kappa_dec_instance({100, 10}, 50, -1), InvalidArgument);
}

TEST(KappaDecInstance, DominatedByKappaDec) {
  // kappa_dec replaces v = m - u by m and u by min(m, f); the intermediate
  // form below is evaluated independently of the kappa_a / kappa_b route.
  for (std::int64_t n = 5; n <= 60; ++n) {
    for (std::int64_t f = 0; 2 * f < n; ++f) {
      const ProblemSize p(n, f);
      for (std::int64_t m = 1; m <= n - f; ++m) {
        const double k = kappa_dec(p, m);
        const auto md = static_cast<double>(m);
        const double umax = static_cast<double>(std::min(m, f));
        const double t = std::sqrt(md) + (std::sqrt(2.0 * md) + std::sqrt(umax)) *
                                             std::sqrt(umax / static_cast<double>(n - 2 * f));
        ASSERT_NEAR(static_cast<double>(n - f) / (md * md) * t * t, k, 1e-10 * k);
        for (std::int64_t u = 0; u <= std::min(m, f); ++u)
          ASSERT_LE(kappa_dec_instance(p, m, u), k * (1 + 1e-12));
      }
    }
  }
}

TEST(KappaDecInstance, NotMonotoneInU) {
  // Grid evaluation: the maximum over u is interior, so neither monotonicity in
  // u nor equality with kappa_dec at u = min(m, f) holds in general.
  const ProblemSize p(100, 10);
  EXPECT_GT(kappa_dec_instance(p, 11, 6), kappa_dec_instance(p, 11, 10));
  EXPECT_NEAR(kappa_dec_instance(p, 11, 6), 13.067056443346688, 1e-12);
  EXPECT_LT(kappa_dec_instance(p, 11, 10), kappa_dec(p, 11));
}

TEST(MultikrumUpper, Values) {
  const ProblemSize p(100, 10);
  EXPECT_NEAR(multikrum_upper(p, 1), kKappaConst100_10, 1e-12);
  EXPECT_NEAR(multikrum_upper(p, 90), kKappaDec100_10_90, 1e-12);
  for (std::int64_t m = 1; m <= 90; ++m) {
    EXPECT_LE(multikrum_upper(p, m), kappa_const(p));
    EXPECT_LE(multikrum_upper(p, m), kappa_dec(p, m));
    EXPECT_DOUBLE_EQ(multikrum_upper(p, m), std::min(kappa_const(p), kappa_dec(p, m)));
  }
}

TEST(BoundProperties, KappaBStrictlyDecreasing) {
  for (std::int64_t n = 5; n <= 200; ++n)
    for (std::int64_t f = 1; 2 * f < n; ++f) {
      const ProblemSize p(n, f);
      for (std::int64_t m = 1; m < n - f; ++m)
        ASSERT_LT(kappa_b(p, m + 1.0), kappa_b(p, static_cast<double>(m))) << n << " " << f;
    }
}

TEST(BoundProperties, ConstantRegimeUpToF) {
  for (std::int64_t n = 5; n <= 120; ++n)
    for (std::int64_t f = 1; 2 * f < n; ++f) {
      const ProblemSize p(n, f);
      for (std::int64_t m = 1; m <= std::min(f, n - f); ++m)
        ASSERT_EQ(multikrum_upper(p, m), kappa_const(p));
    }
}

TEST(BoundProperties, OrderingOverGrid) {
  for (std::int64_t n = 5; n <= 200; ++n)
    for (std::int64_t f = 1; 2 * f < n; ++f) {
      const ProblemSize p(n, f);
      for (std::int64_t m = 1; m <= n - f; ++m)
        ASSERT_LE(universal_lower(p), multikrum_upper(p, m));
      ASSERT_LE(krum_lower(p), multikrum_upper(p, 1));
      if (n > 3 * f) ASSERT_LE(nf_multikrum_lower(p), multikrum_upper(p, n - f));
    }
}

TEST(Appendix, CollapsesForSmallM) {
  for (std::int64_t n = 4; n <= 120; ++n)
    for (std::int64_t f = 1; 3 * f < n; ++f) {
      const ProblemSize p(n, f);
      for (std::int64_t m = 1; m <= n - 2 * f; ++m)
        ASSERT_LE(rel(appendix_lower_R(p, m), universal_lower(p)), 1e-12);
    }
  EXPECT_NEAR(appendix_lower_R({7, 2}, 3), 2.0 / 3.0, 1e-15);
}

TEST(Appendix, PrintedValueAtNf) {
  EXPECT_NEAR(appendix_lower_R({7, 2}, 5), 128.0 / 75.0, 1e-14);
  EXPECT_THROW(appendix_lower_R({6, 2}, 1), OutOfRegime);
  EXPECT_THROW(appendix_lower_R({7, 0}, 1), InvalidArgument);
}

TEST(Transition, ReferenceInstance) {
  const auto r = transition({100, 10});
  EXPECT_NEAR(r.A * r.A, 180.0, 1e-12);
  EXPECT_NEAR(r.m_dagger_real, kMDagger100_10, 1e-8);
  ASSERT_TRUE(r.m_dagger_int.has_value());
  EXPECT_EQ(*r.m_dagger_int, 39);
  EXPECT_NEAR(r.bracket_low, kBracketLow100_10, 1e-10);
  EXPECT_NEAR(r.bracket_high, kBracketHigh100_10, 1e-10);
  EXPECT_LE(rel(kappa_b({100, 10}, r.m_dagger_real), optimal_young_constant()), 1e-9);
}

TEST(Transition, BracketsAndIntegerSwitchOverGrid) {
  const double C = optimal_young_constant();
  for (std::int64_t n = 5; n <= 200; ++n)
    for (std::int64_t f = 1; 2 * f < n; ++f) {
      const ProblemSize p(n, f);
      const auto r = transition(p);
      ASSERT_LE(r.bracket_low, r.m_dagger_real) << n << " " << f;
      ASSERT_LE(r.m_dagger_real, r.bracket_high) << n << " " << f;
      ASSERT_LE(rel(kappa_b(p, r.m_dagger_real), C), 1e-9);
      if (r.m_dagger_int) {
        const auto mi = *r.m_dagger_int;
        ASSERT_LT(kappa_b(p, static_cast<double>(mi)), C);
        if (mi > 1) ASSERT_GE(kappa_b(p, static_cast<double>(mi - 1)), C);
        ASSERT_LE(mi, n - f);
      } else {
        ASSERT_GE(kappa_b(p, static_cast<double>(n - f)), C);
        ASSERT_FALSE(r.crossing_in_range);
      }
    }
}

TEST(Transition, NoCrossingInRangeIsFlagged) {
  // n = 7, f = 3: kappa_b(4) is about 6.1244, still above C.
  const auto r = transition({7, 3});
  EXPECT_NEAR(kappa_b({7, 3}, 4.0), 6.124362178478972, 1e-12);
  EXPECT_FALSE(r.crossing_in_range);
  EXPECT_FALSE(r.m_dagger_int.has_value());
  EXPECT_GT(r.m_dagger_real, 4.0);

  const auto in = transition({5, 2});
  EXPECT_TRUE(in.crossing_in_range);
  EXPECT_EQ(in.m_dagger_int, 3);
}

TEST(Transition, Asymptote) {
  const auto r = transition({10'000'000, 1});
  EXPECT_NEAR(r.m_dagger_real / 1e7, 1.0 / optimal_young_constant(), 1e-3);
  EXPECT_NEAR(1.0 / optimal_young_constant(), 0.171573, 1e-6);
  EXPECT_THROW(transition({10, 0}), InvalidArgument);
  EXPECT_THROW(transition({10, 1}, 0.0), InvalidArgument);
}

TEST(SummaryTable, ReferenceInstance) {
  const auto r = summary_table({100, 10});
  ASSERT_EQ(r.rows.size(), 90u);
  EXPECT_DOUBLE_EQ(r.prior_krum_upper, 6.75);
  EXPECT_NEAR(r.rows.front().upper_thm1, kKappaConst100_10, 1e-12);
  EXPECT_LT(r.rows.front().upper_thm1, r.prior_krum_upper);
  EXPECT_DOUBLE_EQ(r.universal_lower, 0.125);
  EXPECT_DOUBLE_EQ(*r.krum_lower, 98.0 / 82.0);
  EXPECT_DOUBLE_EQ(*r.nf_lower, 0.5);
  for (std::size_t k = 1; k < r.rows.size(); ++k)
    EXPECT_LE(r.rows[k].upper_thm1, r.rows[k - 1].upper_thm1);
  for (const auto& row : r.rows) {
    const double expected = row.m <= 10 ? row.kappa_const
                                        : std::min(row.kappa_const, 1.125 * row.kappa_b);
    EXPECT_DOUBLE_EQ(row.upper_thm1, expected);
    EXPECT_LE(r.universal_lower, row.upper_thm1);
  }
}

TEST(SummaryTable, OutOfRegimeColumnsAbsent) {
  const auto r = summary_table({5, 2});
  EXPECT_FALSE(r.nf_lower.has_value());
  for (const auto& row : r.rows) EXPECT_FALSE(row.appendix_R.has_value());
  EXPECT_FALSE(summary_table({2, 0}).krum_lower.has_value());
}

// Elementary inequalities used throughout the upper-bound argument.

TEST(ElementaryInequalities, Young) {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;
  for (int t = 0; t < 1000; ++t) {
    const int d = 1 + t % 6;
    Eigen::VectorXd x(d), y(d);
    for (int k = 0; k < d; ++k) {
      x(k) = normal(rng);
      y(k) = normal(rng);
    }
    const double alpha = std::pow(10.0, 6.0 * unit(rng) - 3.0);
    ASSERT_LE((x + y).squaredNorm(),
              (1 + alpha) * x.squaredNorm() + (1 + 1 / alpha) * y.squaredNorm() + 1e-12);
  }
  // Minimizing 2(1+a) + (1+1/a) over a > 0 gives (sqrt(2)+1)^2.
  const double a = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(2 * (1 + a) + (1 + 1 / a), optimal_young_constant(), 1e-14);
}

TEST(ElementaryInequalities, Jensen) {
  std::mt19937_64 rng(32);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;
  for (int t = 0; t < 1000; ++t) {
    const int d = 1 + t % 5, p = 1 + t % 9;
    Eigen::VectorXd weighted = Eigen::VectorXd::Zero(d);
    double lambda_sum = 0, sq = 0;
    for (int i = 0; i < p; ++i) {
      Eigen::VectorXd xi(d);
      for (int k = 0; k < d; ++k) xi(k) = normal(rng);
      const double lambda = 1e-3 + unit(rng);
      weighted += lambda * xi;
      lambda_sum += lambda;
      sq += lambda * xi.squaredNorm();
    }
    ASSERT_LE((weighted / lambda_sum).squaredNorm(), sq / lambda_sum + 1e-12);
  }
}

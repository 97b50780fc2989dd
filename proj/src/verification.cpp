#include <mkrum/verification.hpp>

#include <mkrum/adversarial.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace mkrum {

bool LemmaReport::all_passed() const {
  return std::all_of(suites.begin(), suites.end(), [](const CheckSuite& s) { return s.ok(); });
}

std::size_t LemmaReport::suites_passed() const {
  return static_cast<std::size_t>(
      std::count_if(suites.begin(), suites.end(), [](const CheckSuite& s) { return s.ok(); }));
}

namespace {

constexpr double kIdentityTol = 1e-9;
constexpr double kInequalitySlack = 1e-12;

void record(CheckSuite& suite, bool ok, const std::string& what) {
  if (ok) {
    ++suite.passed;
    return;
  }
  if (suite.failed == 0) suite.first_failure = what;
  ++suite.failed;
}

std::string dump(const Cloud& cloud) {
  std::ostringstream os;
  os.precision(17);
  os << "[";
  for (Index i = 0; i < cloud.n(); ++i) {
    os << (i ? ", " : "") << "(";
    for (Index k = 0; k < cloud.d(); ++k) os << (k ? ", " : "") << cloud.points()(i, k);
    os << ")";
  }
  os << "]";
  return os.str();
}

IndexSubset random_subset(Index n, Index size, std::mt19937_64& rng) {
  std::vector<Index> all(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(static_cast<std::size_t>(size));
  return IndexSubset::from_unsorted(std::move(all));
}

Cloud random_cloud(Index n, Index d, int trial, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix<double> pts(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < d; ++k) pts(i, k) = normal(rng);
  if (trial % 10 == 3) {
    const Eigen::RowVectorXd first = pts.row(0);
    pts.rowwise() = first;  // all points equal
  }
  if (trial % 10 == 7) pts = (pts * 1.5).array().round().matrix();  // many exact ties
  return Cloud(std::move(pts));
}

}  // namespace

LemmaReport verify_lemmas(int trials, std::uint64_t seed, int max_n, int max_d) {
  if (trials < 1) throw InvalidArgument("verify_lemmas requires trials >= 1");
  if (max_n < 3 || max_d < 1) throw InvalidArgument("verify_lemmas requires max_n >= 3, max_d >= 1");

  LemmaReport report;
  report.suites = {{"cross_identity"}, {"selected_scores"}, {"distance_control"}, {"young"},
                   {"jensen"}};
  auto& cross = report.suites[0];
  auto& selected = report.suites[1];
  auto& control = report.suites[2];
  auto& young = report.suites[3];
  auto& jensen = report.suites[4];

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double alpha_grid[] = {0.1, 0.5, 1.0, 2.0, 10.0};

  for (int t = 0; t < trials; ++t) {
    const Index n = std::uniform_int_distribution<Index>(3, max_n)(rng);
    const Index f = std::uniform_int_distribution<Index>(0, (n - 1) / 2)(rng);
    const Index m = std::uniform_int_distribution<Index>(1, n - f)(rng);
    const Index d = std::uniform_int_distribution<Index>(1, max_d)(rng);
    const Cloud cloud = random_cloud(n, d, t, rng);
    const IndexSubset S = random_subset(n, n - f, rng);
    const std::string where = "trial " + std::to_string(t) + " n=" + std::to_string(n) +
                              " f=" + std::to_string(f) + " m=" + std::to_string(m) +
                              " cloud=" + dump(cloud);

    {
      const Index a = std::uniform_int_distribution<Index>(1, n)(rng);
      const Index b = std::uniform_int_distribution<Index>(1, n)(rng);
      const auto id = cross_identity_eval(cloud, random_subset(n, a, rng), random_subset(n, b, rng));
      record(cross, std::abs(id.lhs - id.rhs) <= kIdentityTol * std::max(1.0, std::abs(id.lhs)),
             where);
    }

    const ScoreVector<double> scores = score_all(cloud, f);
    const double scatter = subset_scatter(cloud, S);
    {
      const IndexSubset best = select_smallest(scores, m);
      double avg = 0.0;
      for (Index i : best) avg += scores(i);
      avg /= static_cast<double>(m);
      record(selected, avg <= 2.0 * scatter + kInequalitySlack, where);
    }

    {
      // Query at a random data point and at a random location.
      Vector<double> queries[2] = {cloud.point(std::uniform_int_distribution<Index>(0, n - 1)(rng)),
                                   Vector<double>(d)};
      for (Index k = 0; k < d; ++k) queries[1](k) = 2.0 * normal(rng);
      const Vector<double> mean_S = subset_mean(cloud, S);
      const double pref = static_cast<double>(n - f) / static_cast<double>(n - 2 * f);
      for (const auto& x : queries) {
        const double lhs = (x - mean_S).squaredNorm();
        const double s = score(cloud, f, x);
        std::vector<double> alphas(std::begin(alpha_grid), std::end(alpha_grid));
        if (s > 0.0 && scatter > 0.0) alphas.push_back(std::sqrt(scatter / s));
        bool ok = true;
        for (double alpha : alphas)
          ok = ok && lhs <= pref * ((1.0 + alpha) * s + (1.0 + 1.0 / alpha) * scatter) +
                                kInequalitySlack;
        record(control, ok, where);
      }
    }

    {
      Vector<double> x(d), y(d);
      for (Index k = 0; k < d; ++k) {
        x(k) = normal(rng);
        y(k) = normal(rng);
      }
      const double alpha = std::pow(10.0, 6.0 * unit(rng) - 3.0);
      record(young,
             (x + y).squaredNorm() <=
                 (1.0 + alpha) * x.squaredNorm() + (1.0 + 1.0 / alpha) * y.squaredNorm() +
                     kInequalitySlack,
             where);
    }

    {
      const Index p = std::uniform_int_distribution<Index>(1, 12)(rng);
      Vector<double> weighted = Vector<double>::Zero(d);
      double weight_sum = 0.0, weighted_sq = 0.0;
      for (Index i = 0; i < p; ++i) {
        Vector<double> xi(d);
        for (Index k = 0; k < d; ++k) xi(k) = normal(rng);
        const double lambda = 0.01 + unit(rng);
        weighted += lambda * xi;
        weight_sum += lambda;
        weighted_sq += lambda * xi.squaredNorm();
      }
      record(jensen,
             (weighted / weight_sum).squaredNorm() <= weighted_sq / weight_sum + kInequalitySlack,
             where);
    }
  }
  return report;
}

std::vector<CheckSuite> construction_checks() {
  CheckSuite krum_suite{"krum_construction"};
  for (Index n = 3; n <= 60; ++n) {
    for (Index f = 1; 2 * f < n; ++f) {
      const double ratio = kappa_ratio(scenario_krum(n, f)).ratio;
      const double expected = krum_lower(ProblemSize(n, f));
      record(krum_suite, std::abs(ratio - expected) <= 1e-12 * expected,
             "krum n=" + std::to_string(n) + " f=" + std::to_string(f) + " ratio=" +
                 std::to_string(ratio) + " expected=" + std::to_string(expected));
    }
  }
  {
    const double ratio = kappa_ratio(scenario_krum(100, 10)).ratio;
    record(krum_suite, std::abs(ratio - 98.0 / 82.0) <= 1e-12 * ratio,
           "krum n=100 f=10 ratio=" + std::to_string(ratio));
  }

  CheckSuite cluster_suite{"three_cluster_construction"};
  for (Index n = 4; n <= 60; ++n) {
    for (Index f = 1; 3 * f < n; ++f) {
      const double ratio = kappa_ratio(scenario_three_cluster(n, f, 1e-8)).ratio;
      const double expected = nf_multikrum_lower(ProblemSize(n, f));
      record(cluster_suite, std::abs(ratio - expected) <= 1e-6 * expected,
             "three_cluster n=" + std::to_string(n) + " f=" + std::to_string(f) +
                 " ratio=" + std::to_string(ratio) + " expected=" + std::to_string(expected));
    }
  }
  return {krum_suite, cluster_suite};
}

CheckSuite bound_ordering_check(int max_n) {
  CheckSuite suite{"bound_ordering"};
  for (std::int64_t n = 5; n <= max_n; ++n) {
    for (std::int64_t f = 1; 2 * f < n; ++f) {
      const ProblemSize p(n, f);
      const auto report = summary_table(p);
      std::vector<double> lowers_any_m = {report.universal_lower, report.prior_lower};
      bool ok = true;
      for (const auto& row : report.rows) {
        const double upper = row.upper_thm1;
        for (double low : lowers_any_m) ok = ok && low <= upper;
        ok = ok && upper <= row.kappa_const && upper <= row.kappa_dec &&
             upper <= report.prior_krum_upper;
      }
      ok = ok && *report.krum_lower <= report.rows.front().upper_thm1;
      if (report.nf_lower) ok = ok && *report.nf_lower <= report.rows.back().upper_thm1;
      for (std::size_t k = 1; k < report.rows.size(); ++k)
        ok = ok && report.rows[k].upper_thm1 <= report.rows[k - 1].upper_thm1;
      record(suite, ok, "n=" + std::to_string(n) + " f=" + std::to_string(f));
    }
  }
  return suite;
}

std::vector<AppendixComparison> appendix_comparison(std::int64_t n, std::int64_t f,
                                                    double epsilon) {
  const ProblemSize p(n, f);
  std::vector<AppendixComparison> out;
  for (std::int64_t m = 1; m <= n - f; ++m) {
    AppendixComparison c;
    c.n = n;
    c.f = f;
    c.m = m;
    c.printed = appendix_lower_R(p, m);
    c.configuration = appendix_configuration_ratio(p, m, epsilon);
    c.agrees = std::abs(c.printed - c.configuration) <= 1e-6 * c.configuration;
    out.push_back(c);
  }
  return out;
}

}  // namespace mkrum

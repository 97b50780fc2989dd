#include <mkrum/adversarial.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

namespace mkrum {

void Scenario::validate() const {
  params.validate();
  if (params.n != cloud.n()) throw InvalidArgument("scenario: params.n does not match cloud");
  if (honest.size() != params.n - params.f)
    throw InvalidArgument("scenario: honest set must have n-f elements");
  honest.check_nonempty_within(cloud.n());
  if (!(epsilon >= 0.0 && epsilon < 1.0))
    throw InvalidArgument("scenario: epsilon must lie in [0, 1)");
}

RatioResult kappa_ratio(const Cloud& cloud, const AggregationParams& params,
                        const IndexSubset& honest) {
  params.validate();
  if (params.n != cloud.n()) throw InvalidArgument("kappa_ratio: params.n does not match cloud");
  if (honest.size() != params.n - params.f)
    throw InvalidArgument("kappa_ratio: honest set must have n-f elements");
  honest.check_nonempty_within(cloud.n());

  RatioResult r;
  const auto selection = multikrum(cloud, params.f, params.m);
  r.numerator = (selection.aggregate - subset_mean(cloud, honest)).squaredNorm();
  r.denominator = subset_scatter(cloud, honest);
  if (r.denominator > 0.0)
    r.ratio = r.numerator / r.denominator;
  else if (r.numerator > 0.0)
    r.ratio = std::numeric_limits<double>::infinity();
  else
    r.ratio = -std::numeric_limits<double>::infinity();
  return r;
}

RatioResult kappa_ratio(const Scenario& scenario) {
  return kappa_ratio(scenario.cloud, scenario.params, scenario.honest);
}

namespace {

std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > cap) return cap + 1;
  }
  return result;
}

}  // namespace

SupResult kappa_ratio_sup_S(const Cloud& cloud, const AggregationParams& params,
                            std::uint64_t max_subsets) {
  params.validate();
  if (params.n != cloud.n()) throw InvalidArgument("kappa_ratio_sup_S: params.n does not match cloud");
  const auto n = static_cast<std::uint64_t>(params.n);
  const auto k = static_cast<std::uint64_t>(params.n - params.f);
  if (binomial_capped(n, k, max_subsets) > max_subsets)
    throw Infeasible("kappa_ratio_sup_S: C(" + std::to_string(n) + ", " + std::to_string(k) +
                     ") honest sets exceed the enumeration limit; evaluate a fixed honest set "
                     "with kappa_ratio instead");

  // The aggregate does not depend on S.
  const Vector<double> aggregate = multikrum(cloud, params.f, params.m).aggregate;

  std::vector<Index> combo(k);
  for (std::size_t i = 0; i < k; ++i) combo[i] = static_cast<Index>(i);

  SupResult best{IndexSubset(combo), -std::numeric_limits<double>::infinity()};
  bool first = true;
  while (true) {
    IndexSubset subset(combo);
    const double num = (aggregate - subset_mean(cloud, subset)).squaredNorm();
    const double den = subset_scatter(cloud, subset);
    double ratio;
    if (den > 0.0)
      ratio = num / den;
    else
      ratio = num > 0.0 ? std::numeric_limits<double>::infinity()
                        : -std::numeric_limits<double>::infinity();
    if (first || ratio > best.ratio) {
      best = {std::move(subset), ratio};
      first = false;
    }

    // Next combination in lexicographic order.
    std::size_t pos = k;
    while (pos > 0 && combo[pos - 1] == static_cast<Index>(n - k + pos - 1)) --pos;
    if (pos == 0) break;
    ++combo[pos - 1];
    for (std::size_t j = pos; j < k; ++j) combo[j] = combo[j - 1] + 1;
  }
  return best;
}

Scenario scenario_krum(Index n, Index f) {
  if (n < 3) throw InvalidArgument("scenario_krum requires n >= 3");
  if (f < 0 || n - 2 * f < 1) throw InvalidArgument("scenario_krum requires n - 2f >= 1");
  const Index ones = (n - 1) / 2;
  std::vector<double> coords(static_cast<std::size_t>(n), 0.0);
  std::fill(coords.begin(), coords.begin() + ones, 1.0);
  Scenario s{n % 2 == 0 ? "krum_even" : "krum_odd", 0.0, {n, f, 1}, Cloud::line(coords),
             IndexSubset::range(0, n - f)};
  return s;
}

Scenario scenario_three_cluster(Index n, Index f, double epsilon, Index m) {
  if (f < 1) throw InvalidArgument("scenario_three_cluster requires f >= 1");
  if (n <= 3 * f) throw OutOfRegime("scenario_three_cluster requires n > 3f");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw InvalidArgument("scenario_three_cluster requires 0 < epsilon < 1");
  if (m < 0) m = n - f;
  if (m < 1 || m > n - f) throw InvalidArgument("scenario_three_cluster requires 1 <= m <= n-f");
  std::vector<double> coords(static_cast<std::size_t>(n), 0.0);
  for (Index i = 0; i < f; ++i) {
    coords[static_cast<std::size_t>(i)] = -1.0;
    coords[static_cast<std::size_t>(n - 1 - i)] = 1.0 - epsilon;
  }
  return Scenario{"three_cluster", epsilon, {n, f, m}, Cloud::line(coords),
                  IndexSubset::range(0, n - f)};
}

double appendix_configuration_ratio(const ProblemSize& p, Index m, double epsilon) {
  return kappa_ratio(scenario_three_cluster(p.n, p.f, epsilon, m)).ratio;
}

// ---------------------------------------------------------------------------
// Search

void SearchConfig::validate() const {
  params.validate();
  if (params.n - 2 * params.f < 1) throw InvalidArgument("search requires n - 2f >= 1");
  if (params.m > params.n - params.f) throw InvalidArgument("search requires m <= n-f");
  if (d < 1) throw InvalidArgument("search requires d >= 1");
  if (restarts < 1) throw InvalidArgument("search requires restarts >= 1");
  if (iterations < 1) throw InvalidArgument("search requires iterations >= 1");
  if (!(initial_step > 0.0)) throw InvalidArgument("search requires initial_step > 0");
  if (!(clip_multiplier > 0.0)) throw InvalidArgument("search requires clip_multiplier > 0");
  if (threads < 1) throw InvalidArgument("search requires threads >= 1");
  if (!(construction_epsilon > 0.0 && construction_epsilon < 1.0))
    throw InvalidArgument("search requires 0 < construction_epsilon < 1");
}

namespace {

enum class Layout { three_cluster, krum, gaussian };

struct RestartOutcome {
  double ratio = -std::numeric_limits<double>::infinity();
  Matrix<double> points;
  Layout layout = Layout::gaussian;
  std::int64_t evaluations = 0;
};

std::vector<Layout> layout_pool(const AggregationParams& p) {
  std::vector<Layout> pool;
  if (p.f >= 1 && p.n > 3 * p.f) pool.push_back(Layout::three_cluster);
  if (p.n >= 3) pool.push_back(Layout::krum);
  pool.push_back(Layout::gaussian);
  return pool;
}

const char* layout_name(Layout layout) {
  switch (layout) {
    case Layout::three_cluster: return "three_cluster";
    case Layout::krum: return "krum";
    case Layout::gaussian: return "gaussian";
  }
  return "unknown";
}

Matrix<double> embed_line(const Cloud& line, Index d) {
  Matrix<double> pts = Matrix<double>::Zero(line.n(), d);
  pts.col(0) = line.points().col(0);
  return pts;
}

Matrix<double> initial_points(const SearchConfig& cfg, Layout layout, std::mt19937_64& rng) {
  const auto& p = cfg.params;
  switch (layout) {
    case Layout::three_cluster:
      return embed_line(scenario_three_cluster(p.n, p.f, cfg.construction_epsilon).cloud, cfg.d);
    case Layout::krum:
      return embed_line(scenario_krum(p.n, p.f).cloud, cfg.d);
    case Layout::gaussian: break;
  }
  std::normal_distribution<double> normal;
  const Index honest = p.n - p.f;
  Matrix<double> pts(p.n, cfg.d);
  for (Index i = 0; i < honest; ++i)
    for (Index k = 0; k < cfg.d; ++k) pts(i, k) = normal(rng);
  std::uniform_int_distribution<Index> pick(0, honest - 1);
  for (Index i = honest; i < p.n; ++i) {
    const Index anchor = pick(rng);
    for (Index k = 0; k < cfg.d; ++k) pts(i, k) = pts(anchor, k) + 0.1 * normal(rng);
  }
  return pts;
}

double evaluate(const Matrix<double>& pts, const AggregationParams& params,
                const IndexSubset& honest) {
  return kappa_ratio(Cloud(pts), params, honest).ratio;
}

RestartOutcome run_restart(const SearchConfig& cfg, int restart, Layout layout) {
  const auto& p = cfg.params;
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed),
                    static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal;

  const Index n_honest = p.n - p.f;
  const IndexSubset honest = IndexSubset::range(0, n_honest);
  Matrix<double> pts = initial_points(cfg, layout, rng);

  const Matrix<double> honest_pts = pts.topRows(n_honest);
  const Vector<double> center = honest_pts.colwise().mean().transpose();
  double diameter = 0.0;
  for (Index i = 0; i < n_honest; ++i)
    for (Index j = i + 1; j < n_honest; ++j)
      diameter = std::max(diameter, (honest_pts.row(i) - honest_pts.row(j)).norm());
  if (diameter == 0.0) diameter = 1.0;
  const double radius = cfg.clip_multiplier * diameter;

  auto clip = [&](Matrix<double>& m) {
    for (Index i = n_honest; i < p.n; ++i) {
      Vector<double> offset = m.row(i).transpose() - center;
      const double len = offset.norm();
      if (len > radius) m.row(i) = (center + offset * (radius / len)).transpose();
    }
  };
  clip(pts);

  RestartOutcome out;
  out.layout = layout;
  out.ratio = evaluate(pts, p, honest);
  out.evaluations = 1;
  out.points = pts;
  if (p.f == 0) return out;

  const double base_step = cfg.initial_step * diameter;
  double step = base_step;
  Matrix<double> trial = pts;
  for (int it = 0; it < cfg.iterations; ++it) {
    trial = out.points;
    for (Index i = n_honest; i < p.n; ++i)
      for (Index k = 0; k < cfg.d; ++k) trial(i, k) += step * normal(rng);
    clip(trial);
    const double ratio = evaluate(trial, p, honest);
    ++out.evaluations;
    if (ratio > out.ratio) {
      out.ratio = ratio;
      out.points = trial;
      step *= 1.5;
    } else {
      step *= 0.7;
      if (step < 1e-9 * base_step) step = base_step;
    }
  }
  return out;
}

}  // namespace

SearchResult run_search(const SearchConfig& config) {
  config.validate();
  const auto pool = layout_pool(config.params);
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(config.restarts));

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int r = next++; r < config.restarts; r = next++)
      outcomes[static_cast<std::size_t>(r)] =
          run_restart(config, r, pool[static_cast<std::size_t>(r) % pool.size()]);
  };
  const int n_threads = std::min(config.threads, config.restarts);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  int best = 0;
  std::int64_t evaluations = 0;
  for (int r = 0; r < config.restarts; ++r) {
    evaluations += outcomes[static_cast<std::size_t>(r)].evaluations;
    if (outcomes[static_cast<std::size_t>(r)].ratio > outcomes[static_cast<std::size_t>(best)].ratio)
      best = r;
  }
  const auto& winner = outcomes[static_cast<std::size_t>(best)];
  const auto& p = config.params;
  Scenario scenario{std::string("search:") + layout_name(winner.layout),
                    winner.layout == Layout::three_cluster ? config.construction_epsilon : 0.0,
                    p, Cloud(winner.points), IndexSubset::range(0, p.n - p.f)};
  return SearchResult{config.seed,
                      winner.ratio,
                      std::move(scenario),
                      multikrum_upper(ProblemSize(p.n, p.f), p.m),
                      best,
                      evaluations};
}

SearchResult search_lower_bound(const SearchConfig& config) {
  SearchResult result = run_search(config);
  if (!result.sound())
    throw TheoryViolation("search ratio " + std::to_string(result.best_ratio) +
                          " exceeds the upper bound " + std::to_string(result.upper_bound));
  return result;
}

}  // namespace mkrum

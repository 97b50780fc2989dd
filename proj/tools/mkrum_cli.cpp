// mkrum: bounds tables, transition-point data, adversarial search, lemma
// verification and aggregation of point files.
//
// Exit codes: 0 success, 1 usage or input error, 2 verification or
// soundness failure.

#include <mkrum/adversarial.hpp>
#include <mkrum/bounds.hpp>
#include <mkrum/io.hpp>
#include <mkrum/verification.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <iostream>

namespace {

using namespace mkrum;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerification = 2;

struct Common {
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out;
  bool no_timestamp = false;
  std::string log = "runs.jsonl";
};

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void log_run(const Common& common, const std::string& command, json parameters,
             const std::vector<std::string>& outputs, const std::string& status) {
  if (common.log.empty()) return;
  json record{{"command", command},
              {"parameters", std::move(parameters)},
              {"seed", common.seed_given ? json(common.seed) : json(nullptr)},
              {"outputs", outputs},
              {"status", status}};
  if (!common.no_timestamp) record["timestamp"] = utc_timestamp();
  append_line(common.log, record.dump());
}

/// Writes to --out when given, else to stdout.
std::vector<std::string> emit(const Common& common, const std::string& content) {
  if (common.out.empty()) {
    std::cout << content;
    return {};
  }
  write_file_atomic(common.out, content);
  return {common.out};
}

// ---------------------------------------------------------------------------

struct BoundsArgs {
  std::int64_t n = 0;
  std::int64_t f = 0;
  std::int64_t m_min = 1;
  std::int64_t m_max = -1;
  bool config_curve = false;
  double epsilon = 1e-10;
};

int run_bounds(const Common& common, const BoundsArgs& args) {
  const ProblemSize p(args.n, args.f);
  BoundReport report = summary_table(p);
  const std::int64_t m_max = args.m_max < 0 ? p.n - p.f : args.m_max;
  if (args.m_min < 1 || m_max > p.n - p.f || args.m_min > m_max)
    throw InvalidArgument("m range must satisfy 1 <= m-min <= m-max <= n-f");
  std::erase_if(report.rows,
                [&](const BoundRow& r) { return r.m < args.m_min || r.m > m_max; });

  std::optional<std::vector<std::optional<double>>> curve;
  if (args.config_curve) {
    curve.emplace();
    for (const auto& row : report.rows) {
      if (p.f >= 1 && p.n > 3 * p.f)
        curve->push_back(appendix_configuration_ratio(p, row.m, args.epsilon));
      else
        curve->push_back(std::nullopt);
    }
  }
  const auto outputs = emit(common, bounds_csv(report, curve));
  log_run(common, "bounds",
          {{"n", args.n}, {"f", args.f}, {"m_min", args.m_min}, {"m_max", m_max},
           {"config_curve", args.config_curve}},
          outputs, "ok");
  return kExitOk;
}

struct TransitionArgs {
  std::vector<double> ratios = {0.1, 0.01, 0.001};
  std::vector<std::int64_t> ns = {1000, 10000, 100000};
  double tol = 1e-9;
};

int run_transition(const Common& common, const TransitionArgs& args) {
  std::vector<TransitionRow> rows;
  bool brackets_ok = true;
  for (double ratio : args.ratios) {
    for (std::int64_t n : args.ns) {
      const auto f = static_cast<std::int64_t>(std::llround(ratio * static_cast<double>(n)));
      if (f < 1)
        throw InvalidArgument("ratio " + format_double(ratio) + " with n=" + std::to_string(n) +
                              " gives f < 1");
      TransitionRow row{ratio, transition(ProblemSize(n, f), args.tol)};
      const auto& r = row.report;
      if (!(r.bracket_low <= r.m_dagger_real && r.m_dagger_real <= r.bracket_high)) {
        std::cerr << "bracket violated at n=" << n << " f=" << f << "\n";
        brackets_ok = false;
      }
      rows.push_back(row);
    }
  }
  const auto outputs = emit(common, transition_csv(rows));
  const std::string status = brackets_ok ? "ok" : "verification-failure";
  log_run(common, "transition", {{"ratios", args.ratios}, {"ns", args.ns}, {"tol", args.tol}},
          outputs, status);
  return brackets_ok ? kExitOk : kExitVerification;
}

struct SearchArgs {
  std::int64_t n = 0;
  std::int64_t f = 0;
  std::int64_t m = -1;
  std::int64_t d = 1;
  int restarts = 16;
  int iterations = 500;
  double step = 0.1;
  double clip = 10.0;
  int threads = 1;
};

int run_search_cmd(const Common& common, const SearchArgs& args) {
  SearchConfig cfg;
  cfg.params = {args.n, args.f, args.m < 0 ? args.n - args.f : args.m};
  cfg.d = args.d;
  cfg.restarts = args.restarts;
  cfg.iterations = args.iterations;
  cfg.initial_step = args.step;
  cfg.clip_multiplier = args.clip;
  cfg.threads = args.threads;
  cfg.seed = common.seed;
  cfg.validate();
  const SearchResult result = run_search(cfg);

  json doc = search_result_to_json(result);
  if (!common.no_timestamp) doc["timestamp"] = utc_timestamp();
  std::vector<std::string> outputs;
  if (!common.out.empty()) {
    write_file_atomic(common.out, doc.dump(2) + "\n");
    outputs.push_back(common.out);
  }
  std::cout << "best_ratio=" << format_double(result.best_ratio)
            << " upper_bound=" << format_double(result.upper_bound)
            << " restart_of_best=" << result.restart_of_best
            << " evaluations=" << result.evaluations << "\n";
  if (common.out.empty()) std::cout << doc.dump(2) << "\n";

  const bool sound = result.sound();
  if (!sound) std::cerr << "theory violation: best_ratio exceeds the upper bound\n";
  log_run(common, "search",
          {{"n", cfg.params.n}, {"f", cfg.params.f}, {"m", cfg.params.m}, {"d", cfg.d},
           {"restarts", cfg.restarts}, {"iterations", cfg.iterations},
           {"step", cfg.initial_step}, {"clip", cfg.clip_multiplier}},
          outputs, sound ? "ok" : "verification-failure");
  return sound ? kExitOk : kExitVerification;
}

struct VerifyArgs {
  int trials = 1000;
  int max_n = 30;
  int max_d = 5;
};

void print_suite(std::ostream& os, const CheckSuite& s) {
  os << (s.ok() ? "PASS " : "FAIL ") << s.name << ": " << s.passed << " passed, " << s.failed
     << " failed\n";
  if (!s.ok()) os << "  counterexample: " << s.first_failure << "\n";
}

int run_verify(const Common& common, const VerifyArgs& args) {
  const std::uint64_t seed = common.seed_given ? common.seed : 7;
  std::ostringstream os;
  bool ok = true;

  const LemmaReport lemmas = verify_lemmas(args.trials, seed, args.max_n, args.max_d);
  for (const auto& s : lemmas.suites) print_suite(os, s);
  os << lemmas.suites_passed() << "/" << lemmas.suites.size() << " lemma suites passed\n";
  ok = ok && lemmas.all_passed();

  for (const auto& s : construction_checks()) {
    print_suite(os, s);
    ok = ok && s.ok();
  }
  const CheckSuite ordering = bound_ordering_check();
  print_suite(os, ordering);
  ok = ok && ordering.ok();

  // The appendix closed form must agree with its configuration for m <= n-2f;
  // beyond that the printed value is known not to.
  CheckSuite appendix{"appendix_small_m"};
  for (const auto& c : appendix_comparison(7, 2)) {
    const bool small_m = c.m <= c.n - 2 * c.f;
    if (small_m) {
      (c.agrees ? appendix.passed : appendix.failed)++;
      if (!c.agrees && appendix.first_failure.empty())
        appendix.first_failure = "m=" + std::to_string(c.m);
    } else if (!c.agrees) {
      os << "NOTE documented inconsistency: appendix R(" << c.n << "," << c.f << "," << c.m
         << ") printed=" << format_double(c.printed)
         << " configuration=" << format_double(c.configuration) << "\n";
    }
  }
  print_suite(os, appendix);
  ok = ok && appendix.ok();

  os << (ok ? "verification passed\n" : "verification FAILED\n");
  std::cout << os.str();
  std::vector<std::string> outputs;
  if (!common.out.empty()) {
    write_file_atomic(common.out, os.str());
    outputs.push_back(common.out);
  }
  log_run(common, "verify",
          {{"trials", args.trials}, {"max_n", args.max_n}, {"max_d", args.max_d}}, outputs,
          ok ? "ok" : "verification-failure");
  return ok ? kExitOk : kExitVerification;
}

struct AggregateArgs {
  std::string input;
  std::string rule = "multikrum";
  std::int64_t f = 0;
  std::int64_t m = -1;
  double tol = 1e-10;
  int max_iter = 1000;
};

int run_aggregate(const Common& common, const AggregateArgs& args) {
  const Cloud cloud = parse_cloud(read_file(args.input));
  json record;
  if (args.rule == "krum" || args.rule == "multikrum") {
    const Index m = args.rule == "krum" ? 1 : (args.m < 0 ? cloud.n() - args.f : args.m);
    const auto selection = multikrum(cloud, args.f, m);
    record = selection_to_json(args.rule, args.f, m, selection.selected, selection.aggregate);
  } else {
    const auto rule = parse_baseline_rule(args.rule);
    if (!rule) throw InvalidArgument("unknown rule '" + args.rule + "'");
    const auto result = baseline_aggregate(cloud, *rule, args.f, args.tol, args.max_iter);
    record = selection_to_json(args.rule, args.f, cloud.n(), IndexSubset(), result.aggregate);
    if (*rule == BaselineRule::geometric_median) {
      record["iterations"] = result.iterations;
      record["converged"] = result.converged;
    }
  }
  const auto outputs = emit(common, record.dump() + "\n");
  log_run(common, "aggregate",
          {{"input", args.input}, {"rule", args.rule}, {"f", args.f}, {"m", args.m}}, outputs,
          "ok");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Krum / MultiKrum robustness bounds and adversarial search"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Configuration file (key=value lines, [subcommand] sections)");

  Common common;
  app.add_option("--seed", common.seed, "Random seed");
  app.add_option("--out", common.out, "Output file (default: standard output)");
  app.add_flag("--no-timestamp", common.no_timestamp, "Omit timestamps for byte-stable output");
  app.add_option("--log", common.log, "Append-only JSON-lines run log (empty to disable)")
      ->capture_default_str();

  BoundsArgs bounds;
  auto* cmd_bounds = app.add_subcommand("bounds", "Bound table across m");
  cmd_bounds->add_option("--n", bounds.n)->required();
  cmd_bounds->add_option("--f", bounds.f)->required();
  cmd_bounds->add_option("--m-min", bounds.m_min)->capture_default_str();
  cmd_bounds->add_option("--m-max", bounds.m_max, "Default n-f");
  cmd_bounds->add_flag("--config-curve", bounds.config_curve,
                       "Append the three-cluster configuration ratio as column config_R");
  cmd_bounds->add_option("--epsilon", bounds.epsilon, "Epsilon for the configuration curve")
      ->capture_default_str();

  TransitionArgs transition_args;
  auto* cmd_transition =
      app.add_subcommand("transition", "Transition point m-dagger across n");
  cmd_transition->add_option("--ratios", transition_args.ratios)->capture_default_str();
  cmd_transition->add_option("--ns", transition_args.ns)->capture_default_str();
  cmd_transition->add_option("--tol", transition_args.tol)->capture_default_str();

  SearchArgs search;
  auto* cmd_search = app.add_subcommand("search", "Seeded search for large robustness ratios");
  cmd_search->add_option("--n", search.n)->required();
  cmd_search->add_option("--f", search.f)->required();
  cmd_search->add_option("--m", search.m, "Default n-f");
  cmd_search->add_option("--d", search.d)->capture_default_str();
  cmd_search->add_option("--restarts", search.restarts)->capture_default_str();
  cmd_search->add_option("--iterations", search.iterations)->capture_default_str();
  cmd_search->add_option("--step", search.step, "Initial step, in honest diameters")
      ->capture_default_str();
  cmd_search->add_option("--clip", search.clip, "Clip radius, in honest diameters")
      ->capture_default_str();
  cmd_search->add_option("--threads", search.threads)->capture_default_str();

  VerifyArgs verify;
  auto* cmd_verify = app.add_subcommand("verify", "Lemma suites and construction checks");
  cmd_verify->add_option("--trials", verify.trials)->capture_default_str();
  cmd_verify->add_option("--max-n", verify.max_n)->capture_default_str();
  cmd_verify->add_option("--max-d", verify.max_d)->capture_default_str();

  AggregateArgs aggregate;
  auto* cmd_aggregate = app.add_subcommand("aggregate", "Aggregate a PointCloud JSON file");
  cmd_aggregate->add_option("--input", aggregate.input)->required();
  cmd_aggregate->add_option("--rule", aggregate.rule)
      ->check(CLI::IsMember({"krum", "multikrum", "mean", "coordinate_median", "trimmed_mean",
                             "geometric_median"}))
      ->capture_default_str();
  cmd_aggregate->add_option("--f", aggregate.f)->capture_default_str();
  cmd_aggregate->add_option("--m", aggregate.m, "Default n-f");
  cmd_aggregate->add_option("--tol", aggregate.tol)->capture_default_str();
  cmd_aggregate->add_option("--max-iter", aggregate.max_iter)->capture_default_str();

  for (auto* sub : {cmd_bounds, cmd_transition, cmd_search, cmd_verify, cmd_aggregate})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  common.seed_given = app.get_option("--seed")->count() > 0;

  try {
    if (*cmd_bounds) return run_bounds(common, bounds);
    if (*cmd_transition) return run_transition(common, transition_args);
    if (*cmd_search) return run_search_cmd(common, search);
    if (*cmd_verify) return run_verify(common, verify);
    if (*cmd_aggregate) return run_aggregate(common, aggregate);
  } catch (const TheoryViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerification;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

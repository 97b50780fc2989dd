#include <mkrum/io.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mkrum {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

std::string field_error(const std::string& field, const std::string& what) {
  return field + ": " + what;
}

const json& require(const json& j, const char* key) {
  if (!j.is_object()) throw InvalidArgument("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw InvalidArgument(field_error(key, "missing field"));
  return *it;
}

Index require_int(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_number_integer()) throw InvalidArgument(field_error(key, "expected an integer"));
  return v.get<Index>();
}

double require_number(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_number()) throw InvalidArgument(field_error(key, "expected a number"));
  return v.get<double>();
}

Matrix<double> points_from_json(const json& rows, std::optional<Index> d_declared) {
  if (!rows.is_array() || rows.empty())
    throw InvalidArgument(field_error("points", "expected a nonempty array of rows"));
  const auto n = static_cast<Index>(rows.size());
  Index d = -1;
  Matrix<double> pts;
  for (Index i = 0; i < n; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    const std::string where = "points[" + std::to_string(i) + "]";
    if (!row.is_array()) throw InvalidArgument(field_error(where, "expected an array"));
    if (d < 0) {
      d = static_cast<Index>(row.size());
      if (d < 1) throw InvalidArgument(field_error(where, "empty row"));
      if (d_declared && *d_declared != d)
        throw InvalidArgument(field_error(where, "has " + std::to_string(d) +
                                                     " entries but d=" + std::to_string(*d_declared)));
      pts.resize(n, d);
    }
    if (static_cast<Index>(row.size()) != d)
      throw InvalidArgument(field_error(where, "ragged row: expected " + std::to_string(d) +
                                                   " entries, got " + std::to_string(row.size())));
    for (Index k = 0; k < d; ++k) {
      const json& v = row[static_cast<std::size_t>(k)];
      const std::string cell = where + "[" + std::to_string(k) + "]";
      if (!v.is_number()) throw InvalidArgument(field_error(cell, "expected a number"));
      const double x = v.get<double>();
      if (!std::isfinite(x)) throw InvalidArgument(field_error(cell, "non-finite value"));
      pts(i, k) = x;
    }
  }
  return pts;
}

json points_to_json(const Cloud& cloud) {
  json rows = json::array();
  for (Index i = 0; i < cloud.n(); ++i) {
    json row = json::array();
    for (Index k = 0; k < cloud.d(); ++k) row.push_back(cloud.points()(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string csv_field(const std::optional<double>& value) {
  return value ? format_double(*value) : std::string();
}

}  // namespace

json cloud_to_json(const Cloud& cloud) {
  return json{{"n", cloud.n()}, {"d", cloud.d()}, {"points", points_to_json(cloud)}};
}

Cloud cloud_from_json(const json& j) {
  const Index n = require_int(j, "n");
  const Index d = require_int(j, "d");
  Matrix<double> pts = points_from_json(require(j, "points"), d);
  if (pts.rows() != n)
    throw InvalidArgument(field_error("n", "declared " + std::to_string(n) + " but points has " +
                                               std::to_string(pts.rows()) + " rows"));
  return Cloud(std::move(pts));
}

Cloud parse_cloud(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("malformed JSON: ") + e.what());
  }
  return cloud_from_json(j);
}

json subset_to_json(const IndexSubset& subset) {
  json out = json::array();
  for (Index i : subset) out.push_back(i + 1);
  return out;
}

IndexSubset subset_from_json(const json& j, Index n, const std::string& field) {
  if (!j.is_array()) throw InvalidArgument(field_error(field, "expected an array of indices"));
  std::vector<Index> indices;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw InvalidArgument(field_error(field, "expected integers"));
    const auto i = v.get<Index>();
    if (i < 1 || i > n)
      throw InvalidArgument(field_error(field, "index " + std::to_string(i) + " outside [1, " +
                                                   std::to_string(n) + "]"));
    indices.push_back(i - 1);
  }
  try {
    return IndexSubset(std::move(indices));
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(field_error(field, e.what()));
  }
}

json scenario_to_json(const Scenario& s) {
  return json{{"name", s.name},
              {"epsilon", s.epsilon},
              {"n", s.params.n},
              {"f", s.params.f},
              {"m", s.params.m},
              {"honest", subset_to_json(s.honest)},
              {"points", points_to_json(s.cloud)}};
}

Scenario scenario_from_json(const json& j) {
  const json& name = require(j, "name");
  if (!name.is_string()) throw InvalidArgument(field_error("name", "expected a string"));
  AggregationParams params{require_int(j, "n"), require_int(j, "f"), require_int(j, "m")};
  Cloud cloud(points_from_json(require(j, "points"), std::nullopt));
  Scenario s{name.get<std::string>(), require_number(j, "epsilon"), params, std::move(cloud),
             subset_from_json(require(j, "honest"), params.n, "honest")};
  s.validate();
  return s;
}

json search_result_to_json(const SearchResult& r) {
  return json{{"seed", r.seed},
              {"best_ratio", r.best_ratio},
              {"upper_bound", r.upper_bound},
              {"restart_of_best", r.restart_of_best},
              {"evaluations", r.evaluations},
              {"scenario", scenario_to_json(r.best_scenario)}};
}

SearchResult search_result_from_json(const json& j) {
  const json& seed = require(j, "seed");
  if (!seed.is_number_unsigned() && !seed.is_number_integer())
    throw InvalidArgument(field_error("seed", "expected an integer"));
  return SearchResult{seed.get<std::uint64_t>(),
                      require_number(j, "best_ratio"),
                      scenario_from_json(require(j, "scenario")),
                      require_number(j, "upper_bound"),
                      static_cast<int>(require_int(j, "restart_of_best")),
                      require_int(j, "evaluations")};
}

json selection_to_json(const std::string& rule, Index f, Index m, const IndexSubset& selected,
                       const Vector<double>& aggregate) {
  json agg = json::array();
  for (Index k = 0; k < aggregate.size(); ++k) agg.push_back(aggregate(k));
  return json{{"rule", rule}, {"f", f}, {"m", m}, {"selected", subset_to_json(selected)},
              {"aggregate", std::move(agg)}};
}

json transition_to_json(const TransitionReport& r) {
  json out{{"n", r.n},
           {"f", r.f},
           {"m_dagger_real", r.m_dagger_real},
           {"m_dagger_int", nullptr},
           {"bracket_low", r.bracket_low},
           {"bracket_high", r.bracket_high}};
  if (r.m_dagger_int) out["m_dagger_int"] = *r.m_dagger_int;
  return out;
}

std::string bounds_csv(const BoundReport& report,
                       const std::optional<std::vector<std::optional<double>>>& curve) {
  if (curve && curve->size() != report.rows.size())
    throw InvalidArgument("configuration curve length does not match the bound table");
  std::ostringstream os;
  os << kBoundsHeader << (curve ? ",config_R" : "") << "\n";
  for (std::size_t k = 0; k < report.rows.size(); ++k) {
    const auto& row = report.rows[k];
    os << row.m << ',' << format_double(row.upper_thm1) << ',' << format_double(row.kappa_const)
       << ',' << format_double(row.kappa_dec) << ',' << format_double(row.kappa_a) << ','
       << format_double(row.kappa_b) << ',' << format_double(report.universal_lower) << ','
       << csv_field(report.krum_lower) << ',' << csv_field(report.nf_lower) << ','
       << csv_field(row.appendix_R);
    if (curve) os << ',' << csv_field((*curve)[k]);
    os << "\n";
  }
  return os.str();
}

std::string transition_csv(const std::vector<TransitionRow>& rows) {
  const double reference = 1.0 / optimal_young_constant();
  std::ostringstream os;
  os << kTransitionHeader << "\n";
  for (const auto& row : rows) {
    const auto& r = row.report;
    const auto n = static_cast<double>(r.n);
    os << format_double(row.ratio) << ',' << r.n << ',' << r.f << ','
       << format_double(r.m_dagger_real) << ','
       << (r.m_dagger_int ? std::to_string(*r.m_dagger_int) : std::string()) << ','
       << format_double(r.m_dagger_real / n) << ',' << format_double(r.bracket_low / n) << ','
       << format_double(r.bracket_high / n) << ',' << format_double(reference) << "\n";
  }
  return os.str();
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t k = 0; k < header.size(); ++k)
    if (header[k] == name) return k;
  throw InvalidArgument("CSV has no column '" + name + "'");
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(s);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (!s.empty() && s.back() == ',') fields.emplace_back();
    return fields;
  };
  if (!std::getline(in, line)) throw InvalidArgument("CSV: missing header");
  table.header = split(line);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != table.header.size())
      throw InvalidArgument("CSV line " + std::to_string(line_no) + ": expected " +
                            std::to_string(table.header.size()) + " fields, got " +
                            std::to_string(fields.size()));
    std::vector<std::optional<double>> row;
    for (const auto& field : fields) {
      if (field.empty()) {
        row.emplace_back();
        continue;
      }
      double value = 0.0;
      const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
      if (res.ec != std::errc() || res.ptr != field.data() + field.size())
        throw InvalidArgument("CSV line " + std::to_string(line_no) + ": bad number '" + field + "'");
      row.emplace_back(value);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw InvalidArgument("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void append_line(const std::filesystem::path& path, const std::string& line) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw InvalidArgument("cannot append to " + path.string());
  out << line << "\n";
}

}  // namespace mkrum

#pragma once

// File formats. Point indices are 0-based in memory and 1-based in every
// serialized form.

#include <mkrum/adversarial.hpp>
#include <mkrum/bounds.hpp>

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mkrum {

using json = nlohmann::json;

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

json cloud_to_json(const Cloud& cloud);
/// Throws InvalidArgument naming the offending field on malformed input.
Cloud cloud_from_json(const json& j);
Cloud parse_cloud(const std::string& text);

json subset_to_json(const IndexSubset& subset);
IndexSubset subset_from_json(const json& j, Index n, const std::string& field);

json scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const json& j);

json search_result_to_json(const SearchResult& result);
/// The embedded scenario plus the result scalars; the ratio is not recomputed.
SearchResult search_result_from_json(const json& j);

json selection_to_json(const std::string& rule, Index f, Index m, const IndexSubset& selected,
                       const Vector<double>& aggregate);

json transition_to_json(const TransitionReport& report);

inline constexpr const char* kBoundsHeader =
    "m,upper_thm1,kappa_const,kappa_dec,kappa_a,kappa_b,universal_lower,krum_lower,nf_lower,appendix_R";

/// Bound table as CSV. If `configuration_curve` is given (one entry per row),
/// a trailing `config_R` column is appended.
std::string bounds_csv(const BoundReport& report,
                       const std::optional<std::vector<std::optional<double>>>& configuration_curve =
                           std::nullopt);

struct TransitionRow {
  double ratio = 0.0;
  TransitionReport report;
};

inline constexpr const char* kTransitionHeader =
    "ratio,n,f,m_dagger_real,m_dagger_int,m_dagger_over_n,bracket_low_over_n,bracket_high_over_n,"
    "reference";

std::string transition_csv(const std::vector<TransitionRow>& rows);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::optional<double>>> rows;  // empty field -> nullopt

  std::size_t column(const std::string& name) const;
};

CsvTable parse_csv(const std::string& text);

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
void append_line(const std::filesystem::path& path, const std::string& line);

}  // namespace mkrum

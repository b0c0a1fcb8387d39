#pragma once

#include "loometric/embed.hpp"
#include "loometric/gh.hpp"
#include "loometric/metric_space.hpp"
#include "loometric/obstruction.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace loometric {

using Json = nlohmann::ordered_json;

enum class SpaceFormat { Json, Csv };

/// Malformed input, with a 1-based line and column.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line), column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// {"labels": [...], "distances": [["0", "1/2"], ...]}; entries are rational
/// or decimal strings (plain JSON numbers are read from their literal text).
/// Throws ParseError, or Error from validate_metric.
FiniteMetricSpace parse_space_json(std::string_view text);

/// Header row of labels followed by the square matrix body.
FiniteMetricSpace parse_space_csv(std::string_view text);

/// Format from `format`, else from the extension (.csv means CSV, anything
/// else JSON). Throws IoError if the file cannot be read.
FiniteMetricSpace parse_space(const std::filesystem::path& path, std::optional<SpaceFormat> format = std::nullopt);

std::string read_file(const std::filesystem::path& path);

Json space_json(const FiniteMetricSpace& space);
std::string write_space_json(const FiniteMetricSpace& space);
std::string write_space_csv(const FiniteMetricSpace& space);

/// Blocks of point labels, either {"blocks": [[...], ...]} or a bare array.
/// Integer entries are taken as point indices.
std::vector<std::vector<std::size_t>> parse_family_json(std::string_view text, const FiniteMetricSpace& space);

Json pattern_json(const FiniteMetricSpace& space, const DistancePattern& pattern);
Json simplex_json(const FiniteMetricSpace& space, const SimplexWitness& witness, std::size_t lower_bound);
Json violation_json(const FiniteMetricSpace& space, const Violation& violation);
Json embedding_json(const FiniteMetricSpace& space, const Embedding& embedding);
Json infeasible_json(const FiniteMetricSpace& space, const InfeasibleReport& report);
Json gh_json(const GhResult& result);
Json strip_json(const FiniteMetricSpace& space, const StripFiltration& filtration);
Json family_json(const FiniteMetricSpace& space, const std::vector<std::vector<std::size_t>>& family);
Json error_json(const FiniteMetricSpace* space, const Error& error);

/// 800x600 scatter of a 1- or 2-dimensional embedding, one labelled marker
/// per point.
std::string embedding_svg(const FiniteMetricSpace& space, const Embedding& embedding);

} // namespace loometric

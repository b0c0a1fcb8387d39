#include "loometric/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace loometric {

namespace {

// Line and column of a byte offset (both 1-based).
std::pair<std::size_t, std::size_t> locate(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  std::size_t line = 1, column = 1;
  for (std::size_t k = 0; k < offset; ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

Rational entry_value(const nlohmann::json& v, std::size_t row, std::size_t col) {
  auto fail = [&](const std::string& why) -> ParseError {
    return ParseError(1, 1, "distances[" + std::to_string(row) + "][" + std::to_string(col) + "]: " + why);
  };
  std::string text;
  if (v.is_string()) {
    text = v.get<std::string>();
  } else if (v.is_number()) {
    text = v.dump();
  } else {
    throw fail("expected a rational string");
  }
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument&) {
    throw fail("not a rational: '" + text + "'");
  }
}

} // namespace

FiniteMetricSpace parse_space_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    // byte is 1-based and points just past the offending character.
    const auto [line, col] = locate(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError(line, col, "malformed JSON");
  }
  if (!doc.is_object() || !doc.contains("distances") || !doc["distances"].is_array())
    throw ParseError(1, 1, "expected an object with a \"distances\" array");

  const auto& rows = doc["distances"];
  std::vector<std::vector<Rational>> matrix;
  matrix.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array()) throw ParseError(1, 1, "distances[" + std::to_string(i) + "] is not an array");
    std::vector<Rational> row;
    row.reserve(rows[i].size());
    for (std::size_t j = 0; j < rows[i].size(); ++j) row.push_back(entry_value(rows[i][j], i, j));
    matrix.push_back(std::move(row));
  }

  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    if (!doc["labels"].is_array()) throw ParseError(1, 1, "\"labels\" is not an array");
    for (const auto& l : doc["labels"]) {
      if (!l.is_string()) throw ParseError(1, 1, "labels must be strings");
      labels.push_back(l.get<std::string>());
    }
  } else {
    for (std::size_t i = 0; i < matrix.size(); ++i) labels.push_back(std::to_string(i));
  }
  return validate_metric(std::move(labels), matrix);
}

FiniteMetricSpace parse_space_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw ParseError(1, 1, "empty CSV");

  auto split = [](std::string_view line) {
    std::vector<std::pair<std::size_t, std::string_view>> cells;  // (column, text)
    std::size_t s = 0;
    while (true) {
      const std::size_t e = line.find(',', s);
      const auto cell = line.substr(s, e == std::string_view::npos ? std::string_view::npos : e - s);
      const std::size_t lead = cell.find_first_not_of(" \t");
      cells.emplace_back(s + 1 + (lead == std::string_view::npos ? 0 : lead), trim(cell));
      if (e == std::string_view::npos) break;
      s = e + 1;
    }
    return cells;
  };

  std::vector<std::string> labels;
  for (const auto& [col, cell] : split(lines[0])) labels.emplace_back(cell);
  if (labels.size() == 1 && labels[0].empty()) labels.clear();
  const std::size_t n = labels.size();
  if (lines.size() - 1 != n)
    throw ParseError(lines.size() > n + 1 ? n + 2 : lines.size() + 1, 1,
                     "expected " + std::to_string(n) + " rows, found " + std::to_string(lines.size() - 1));

  std::vector<std::vector<Rational>> matrix;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split(lines[r]);
    if (cells.size() != n) {
      const std::size_t col = cells.size() > n ? cells[n].first : lines[r].size() + 1;
      throw ParseError(r + 1, col,
                       "expected " + std::to_string(n) + " entries, found " + std::to_string(cells.size()));
    }
    std::vector<Rational> row;
    for (const auto& [col, cell] : cells) {
      try {
        row.push_back(parse_rational(cell));
      } catch (const std::invalid_argument&) {
        throw ParseError(r + 1, col, "not a rational: '" + std::string(cell) + "'");
      }
    }
    matrix.push_back(std::move(row));
  }
  return validate_metric(std::move(labels), matrix);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path.string());
  return buf.str();
}

FiniteMetricSpace parse_space(const std::filesystem::path& path, std::optional<SpaceFormat> format) {
  const std::string text = read_file(path);
  if (!format) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    format = ext == ".csv" ? SpaceFormat::Csv : SpaceFormat::Json;
  }
  return *format == SpaceFormat::Csv ? parse_space_csv(text) : parse_space_json(text);
}

Json space_json(const FiniteMetricSpace& space) {
  Json doc;
  doc["labels"] = space.labels();
  Json rows = Json::array();
  for (std::size_t i = 0; i < space.size(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < space.size(); ++j) row.push_back(to_string(space(i, j)));
    rows.push_back(std::move(row));
  }
  doc["distances"] = std::move(rows);
  return doc;
}

std::string write_space_json(const FiniteMetricSpace& space) { return space_json(space).dump(2) + "\n"; }

std::string write_space_csv(const FiniteMetricSpace& space) {
  std::string out;
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (i) out += ',';
    out += space.label(i);
  }
  out += '\n';
  for (std::size_t i = 0; i < space.size(); ++i) {
    for (std::size_t j = 0; j < space.size(); ++j) {
      if (j) out += ',';
      out += to_string(space(i, j));
    }
    out += '\n';
  }
  return out;
}

std::vector<std::vector<std::size_t>> parse_family_json(std::string_view text, const FiniteMetricSpace& space) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = locate(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError(line, col, "malformed JSON");
  }
  if (doc.is_object() && doc.contains("blocks")) doc = doc["blocks"];
  if (!doc.is_array()) throw ParseError(1, 1, "expected an array of blocks");

  std::vector<std::vector<std::size_t>> family;
  for (const auto& block : doc) {
    if (!block.is_array()) throw ParseError(1, 1, "each block must be an array");
    std::vector<std::size_t> members;
    for (const auto& m : block) {
      if (m.is_string()) {
        const auto idx = space.index_of(m.get<std::string>());
        if (!idx) throw ParseError(1, 1, "unknown label '" + m.get<std::string>() + "'");
        members.push_back(*idx);
      } else if (m.is_number_unsigned() || (m.is_number_integer() && m.get<std::int64_t>() >= 0)) {
        const auto idx = m.get<std::size_t>();
        if (idx >= space.size()) throw ParseError(1, 1, "point index " + std::to_string(idx) + " out of range");
        members.push_back(idx);
      } else {
        throw ParseError(1, 1, "block members must be labels or indices");
      }
    }
    family.push_back(std::move(members));
  }
  return family;
}

namespace {

Json labels_of(const FiniteMetricSpace& space, const std::vector<std::size_t>& points) {
  Json out = Json::array();
  for (auto p : points) out.push_back(space.label(p));
  return out;
}

Json pair_json(const FiniteMetricSpace& space, PointPair p) {
  return Json::array({space.label(p.i), space.label(p.j)});
}

std::string_view violation_kind(Violation::Kind k) {
  switch (k) {
    case Violation::Kind::CoincidentPoints: return "CoincidentPoints";
    case Violation::Kind::SourceEqualImageDiffers: return "SourceEqualImageDiffers";
    case Violation::Kind::ImageEqualSourceDiffers: return "ImageEqualSourceDiffers";
  }
  return "";
}

} // namespace

Json pattern_json(const FiniteMetricSpace& space, const DistancePattern& pattern) {
  Json classes = Json::array();
  for (const auto& c : pattern.classes) {
    Json pairs = Json::array();
    for (const auto& p : c.pairs) pairs.push_back(pair_json(space, p));
    classes.push_back(Json{{"value", to_string(c.value)}, {"pairs", std::move(pairs)}});
  }
  return Json{{"points", pattern.points}, {"injective", pattern.classes.size() == pattern.class_of.size()},
              {"classes", std::move(classes)}};
}

Json simplex_json(const FiniteMetricSpace& space, const SimplexWitness& witness, std::size_t lower_bound) {
  return Json{{"points", labels_of(space, witness.points)},
              {"size", witness.points.size()},
              {"side", to_string(witness.side)},
              {"dim_lower_bound", lower_bound}};
}

Json violation_json(const FiniteMetricSpace& space, const Violation& v) {
  Json out{{"kind", violation_kind(v.kind)}};
  if (v.kind == Violation::Kind::CoincidentPoints) {
    out["points"] = pair_json(space, v.first);
  } else {
    out["pairs"] = Json::array({pair_json(space, v.first), pair_json(space, v.second)});
  }
  return out;
}

Json embedding_json(const FiniteMetricSpace& space, const Embedding& embedding) {
  Json coords = Json::object();
  for (std::size_t i = 0; i < space.size(); ++i) {
    Json row = Json::array();
    for (const auto& c : embedding.coords[i]) row.push_back(to_string(c));
    coords[space.label(i)] = std::move(row);
  }
  Json verified;
  if (std::holds_alternative<VerifiedLoose>(embedding.status)) {
    verified = "loose";
  } else if (const auto* v = std::get_if<Violation>(&embedding.status)) {
    verified = Json{{"violated", violation_json(space, *v)}};
  } else {
    verified = "unverified";
  }
  return Json{{"dim", embedding.dim}, {"coords", std::move(coords)}, {"verified", std::move(verified)}};
}

Json infeasible_json(const FiniteMetricSpace& space, const InfeasibleReport& report) {
  Json out{{"infeasible", true}, {"restarts_run", report.restarts_run}};
  out["best_residual"] = report.best_residual ? Json(*report.best_residual) : Json(nullptr);
  if (report.certificate) {
    out["certificate"] = Json{{"simplex", labels_of(space, report.certificate->points)},
                              {"side", to_string(report.certificate->side)}};
  } else {
    out["certificate"] = nullptr;
  }
  return out;
}

Json gh_json(const GhResult& result) {
  Json out{{"value", to_string(result.value)}};
  if (result.exact) {
    out["proof"] = "exact";
  } else {
    out["proof"] = Json{{"lower", to_string(result.lower)}, {"upper", to_string(result.upper)}};
  }
  Json corr = Json::array();
  for (const auto& [i, j] : result.correspondence) corr.push_back(Json::array({i, j}));
  out["correspondence"] = std::move(corr);
  return out;
}

Json strip_json(const FiniteMetricSpace& space, const StripFiltration& filtration) {
  Json layers = Json::array();
  for (std::size_t t = 0; t < filtration.layers.size(); ++t) {
    layers.push_back(Json{{"threshold", to_string(filtration.thresholds[t])},
                          {"points", labels_of(space, filtration.layers[t])}});
  }
  return Json{{"layers", std::move(layers)}, {"residue", labels_of(space, filtration.residue)}};
}

Json family_json(const FiniteMetricSpace& space, const std::vector<std::vector<std::size_t>>& family) {
  Json out = Json::array();
  for (const auto& block : family) out.push_back(labels_of(space, block));
  return out;
}

Json error_json(const FiniteMetricSpace* space, const Error& error) {
  Json out{{"error", errc_name(error.code())}, {"message", error.what()}};
  Json witness = Json::array();
  for (auto w : error.witness()) witness.push_back(w);
  out["witness"] = std::move(witness);
  if (space) {
    Json labels = Json::array();
    for (auto w : error.witness()) labels.push_back(w < space->size() ? space->label(w) : std::to_string(w));
    out["witness_labels"] = std::move(labels);
  }
  return out;
}

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

} // namespace

std::string embedding_svg(const FiniteMetricSpace& space, const Embedding& embedding) {
  constexpr double width = 800, height = 600, margin = 50;
  const std::size_t n = space.size();
  std::vector<double> xs(n, 0.0), ys(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (embedding.dim >= 1) xs[i] = embedding.coords[i][0].get_d();
    if (embedding.dim >= 2) ys[i] = embedding.coords[i][1].get_d();
  }
  auto span_of = [](const std::vector<double>& v) {
    if (v.empty()) return std::pair{0.0, 1.0};
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return std::pair{*lo, *hi > *lo ? *hi : *lo + 1.0};
  };
  const auto [x0, x1] = span_of(xs);
  const auto [y0, y1] = span_of(ys);
  // Same scale on both axes so the picture is not distorted.
  const double scale = std::min((width - 2 * margin) / (x1 - x0),
                                embedding.dim >= 2 ? (height - 2 * margin) / (y1 - y0) : 1e300);

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n";
  svg << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
  if (embedding.dim == 1)
    svg << "<line x1=\"" << margin << "\" y1=\"300\" x2=\"" << width - margin
        << "\" y2=\"300\" stroke=\"#bbb\"/>\n";
  for (std::size_t i = 0; i < n; ++i) {
    const double px = margin + (xs[i] - x0) * scale;
    const double py = embedding.dim >= 2 ? height - margin - (ys[i] - y0) * scale : height / 2;
    svg << "<circle class=\"point\" cx=\"" << px << "\" cy=\"" << py << "\" r=\"4\" fill=\"#1f5fa8\"/>\n";
    svg << "<text x=\"" << px + 6 << "\" y=\"" << py - 6 << "\" font-size=\"12\" font-family=\"sans-serif\">"
        << xml_escape(space.label(i)) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

} // namespace loometric

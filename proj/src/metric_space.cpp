#include "loometric/metric_space.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace loometric {

namespace {

std::string idx(std::size_t i) { return std::to_string(i); }

} // namespace

std::vector<PointPair> all_pairs(std::size_t n) {
  std::vector<PointPair> pairs;
  pairs.reserve(n * (n > 0 ? n - 1 : 0) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.push_back({i, j});
  return pairs;
}

std::optional<std::size_t> FiniteMetricSpace::index_of(std::string_view label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

Rational FiniteMetricSpace::diameter() const {
  Rational best = 0;
  for (const auto& d : dist_)
    if (d > best) best = d;
  return best;
}

std::optional<Rational> FiniteMetricSpace::min_distance() const {
  std::optional<Rational> best;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!best || (*this)(i, j) < *best) best = (*this)(i, j);
  return best;
}

FiniteMetricSpace FiniteMetricSpace::subspace(std::span<const std::size_t> points) const {
  const std::size_t m = points.size();
  if (std::set<std::size_t>(points.begin(), points.end()).size() != m) {
    throw Error(Errc::InvalidArgument, "subspace: repeated point index");
  }
  std::vector<std::string> labels;
  labels.reserve(m);
  std::vector<Rational> dist(m * m);
  for (std::size_t a = 0; a < m; ++a) {
    labels.push_back(labels_.at(points[a]));
    for (std::size_t b = 0; b < m; ++b) dist[a * m + b] = (*this)(points[a], points[b]);
  }
  return FiniteMetricSpace(std::move(labels), std::move(dist));
}

FiniteMetricSpace FiniteMetricSpace::permuted(std::span<const std::size_t> order) const {
  if (order.size() != size()) throw Error(Errc::InvalidArgument, "permuted: order has wrong length");
  return subspace(order);
}

std::vector<std::vector<Rational>> FiniteMetricSpace::matrix() const {
  const std::size_t n = size();
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = (*this)(i, j);
  return m;
}

FiniteMetricSpace validate_metric(std::vector<std::string> labels,
                                  const std::vector<std::vector<Rational>>& matrix) {
  const std::size_t n = matrix.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i].size() != n) {
      throw Error(Errc::Shape, {i}, "row " + idx(i) + " has " + idx(matrix[i].size()) + " entries, expected " + idx(n));
    }
  }
  if (labels.size() != n) {
    throw Error(Errc::Shape, "got " + idx(labels.size()) + " labels for a " + idx(n) + "x" + idx(n) + " matrix");
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (labels[i] == labels[j]) throw Error(Errc::DuplicateLabel, {i, j}, "duplicate label '" + labels[i] + "'");

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Rational& d = matrix[i][j];
      if (d < 0) throw Error(Errc::NegativeEntry, {i, j}, "negative entry at (" + idx(i) + "," + idx(j) + ")");
      if (i == j) {
        if (d != 0) throw Error(Errc::NonzeroDiagonal, {i}, "nonzero diagonal at " + idx(i));
        continue;
      }
      if (j > i && d != matrix[j][i]) {
        throw Error(Errc::Asymmetric, {i, j}, "d(" + idx(i) + "," + idx(j) + ") != d(" + idx(j) + "," + idx(i) + ")");
      }
      if (d == 0) throw Error(Errc::ZeroOffDiagonal, {i, j}, "zero distance between distinct points " + idx(i) + "," + idx(j));
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (matrix[i][j] > matrix[i][k] + matrix[k][j]) {
          throw Error(Errc::TriangleViolation, {i, j, k},
                      "d(" + idx(i) + "," + idx(j) + ") > d(" + idx(i) + "," + idx(k) + ") + d(" + idx(k) + "," + idx(j) + ")");
        }
      }
    }
  }

  std::vector<Rational> dist;
  dist.reserve(n * n);
  for (const auto& row : matrix) dist.insert(dist.end(), row.begin(), row.end());
  return FiniteMetricSpace(std::move(labels), std::move(dist));
}

FiniteMetricSpace validate_metric(const std::vector<std::vector<Rational>>& matrix) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < matrix.size(); ++i) labels.push_back(idx(i));
  return validate_metric(std::move(labels), matrix);
}

DistancePattern distance_pattern(const FiniteMetricSpace& space, const std::optional<Rational>& tolerance) {
  if (tolerance && *tolerance < 0) throw Error(Errc::InvalidArgument, "tolerance must be non-negative");
  const std::size_t n = space.size();
  const auto pairs = all_pairs(n);

  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return space(pairs[a].i, pairs[a].j) < space(pairs[b].i, pairs[b].j);
  });

  DistancePattern pattern;
  pattern.points = n;
  pattern.class_of.assign(pairs.size(), 0);
  const Rational* previous = nullptr;
  for (std::size_t k : order) {
    const Rational& d = space(pairs[k].i, pairs[k].j);
    const bool same = previous && (tolerance ? d - *previous <= *tolerance : d == *previous);
    if (!same) pattern.classes.push_back({d, {}});
    pattern.classes.back().pairs.push_back(pairs[k]);
    pattern.class_of[k] = pattern.classes.size() - 1;
    previous = &d;
  }
  if (tolerance) {
    for (auto& cls : pattern.classes) std::sort(cls.pairs.begin(), cls.pairs.end());
  }
  return pattern;
}

InjectivityResult is_injective(const FiniteMetricSpace& space) {
  InjectivityResult result;
  for (const auto& cls : distance_pattern(space).classes) {
    if (cls.pairs.size() < 2) continue;
    std::pair<PointPair, PointPair> candidate{cls.pairs[0], cls.pairs[1]};
    if (!result.witness || candidate < *result.witness) result.witness = candidate;
  }
  result.injective = !result.witness.has_value();
  return result;
}

namespace {

std::vector<std::size_t> isolated_within(const FiniteMetricSpace& space, const std::vector<std::size_t>& alive,
                                         const Rational& r) {
  std::vector<std::size_t> out;
  for (std::size_t x : alive) {
    const bool isolated = std::all_of(alive.begin(), alive.end(), [&](std::size_t y) { return y == x || space(x, y) >= r; });
    if (isolated) out.push_back(x);
  }
  return out;
}

} // namespace

std::vector<std::size_t> points_ge_r(const FiniteMetricSpace& space, const Rational& r) {
  if (r <= 0) throw Error(Errc::NonPositiveRadius, "radius must be positive");
  std::vector<std::size_t> all(space.size());
  std::iota(all.begin(), all.end(), 0);
  return isolated_within(space, all, r);
}

StripFiltration isolation_strip(const FiniteMetricSpace& space, std::span<const Rational> thresholds) {
  if (thresholds.empty()) throw Error(Errc::EmptyThresholds, "at least one threshold is required");
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    if (thresholds[t] <= 0) throw Error(Errc::NonPositiveRadius, {t}, "thresholds must be positive");
    if (t > 0 && thresholds[t] >= thresholds[t - 1]) {
      throw Error(Errc::NonDecreasingThresholds, {t}, "thresholds must be strictly decreasing");
    }
  }

  StripFiltration result;
  result.thresholds.assign(thresholds.begin(), thresholds.end());
  std::vector<std::size_t> alive(space.size());
  std::iota(alive.begin(), alive.end(), 0);
  for (const Rational& r : thresholds) {
    auto layer = isolated_within(space, alive, r);
    std::erase_if(alive, [&](std::size_t x) { return std::binary_search(layer.begin(), layer.end(), x); });
    result.layers.push_back(std::move(layer));
  }
  result.residue = std::move(alive);
  return result;
}

} // namespace loometric

#pragma once

#include "loometric/errors.hpp"
#include "loometric/rational.hpp"

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace loometric {

/// Unordered pair of distinct point indices, stored with i < j.
struct PointPair {
  std::size_t i = 0;
  std::size_t j = 0;

  static PointPair of(std::size_t a, std::size_t b) { return a < b ? PointPair{a, b} : PointPair{b, a}; }
  auto operator<=>(const PointPair&) const = default;
};

/// Position of {i, j} (i < j) in the row-major enumeration of the
/// n(n-1)/2 off-diagonal pairs.
inline std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n) {
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

/// All off-diagonal pairs in pair_index order.
std::vector<PointPair> all_pairs(std::size_t n);

/// A labeled finite metric space with exact rational distances. Instances
/// only come out of validate_metric (or operations built on it), so the
/// metric axioms always hold.
class FiniteMetricSpace {
public:
  FiniteMetricSpace() = default;

  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  std::optional<std::size_t> index_of(std::string_view label) const;

  const Rational& operator()(std::size_t i, std::size_t j) const { return dist_[i * size() + j]; }
  const Rational& distance(std::size_t i, std::size_t j) const { return (*this)(i, j); }

  /// Largest distance; 0 for spaces with fewer than two points.
  Rational diameter() const;
  /// Smallest off-diagonal distance; nullopt for spaces with fewer than two points.
  std::optional<Rational> min_distance() const;

  /// Restriction to the given points, in the given order.
  FiniteMetricSpace subspace(std::span<const std::size_t> points) const;
  /// Relabeled copy: point k of the result is point order[k] of this space.
  FiniteMetricSpace permuted(std::span<const std::size_t> order) const;
  /// Raw row-major matrix (for serialization).
  std::vector<std::vector<Rational>> matrix() const;

  bool operator==(const FiniteMetricSpace&) const = default;

private:
  friend FiniteMetricSpace validate_metric(std::vector<std::string>, const std::vector<std::vector<Rational>>&);
  FiniteMetricSpace(std::vector<std::string> labels, std::vector<Rational> dist)
      : labels_(std::move(labels)), dist_(std::move(dist)) {}

  std::vector<std::string> labels_;
  std::vector<Rational> dist_;
};

/// Checks the metric axioms and returns the validated space. Throws Error
/// naming the first violated axiom; entries are scanned row-major, the
/// triangle inequality last. TriangleViolation(i, j, k) reports
/// d(i,j) > d(i,k) + d(k,j).
FiniteMetricSpace validate_metric(std::vector<std::string> labels,
                                  const std::vector<std::vector<Rational>>& matrix);

/// Convenience: labels "0", "1", ...
FiniteMetricSpace validate_metric(const std::vector<std::vector<Rational>>& matrix);

struct DistanceClass {
  Rational value;                 // smallest distance in the class
  std::vector<PointPair> pairs;   // lexicographic
};

/// Partition of the off-diagonal pairs into distance-equality classes,
/// ordered by value.
struct DistancePattern {
  std::size_t points = 0;
  std::vector<DistanceClass> classes;
  std::vector<std::size_t> class_of;  // indexed by pair_index

  std::size_t class_of_pair(std::size_t i, std::size_t j) const {
    const auto p = PointPair::of(i, j);
    return class_of[pair_index(p.i, p.j, points)];
  }
};

/// Exact mode groups identical distances. With a tolerance, the sorted
/// distance list is split wherever consecutive values differ by more than
/// the tolerance (single linkage on the line).
DistancePattern distance_pattern(const FiniteMetricSpace& space,
                                 const std::optional<Rational>& tolerance = std::nullopt);

struct InjectivityResult {
  bool injective = true;
  /// Lexicographically smallest pair of distinct pairs with equal distance.
  std::optional<std::pair<PointPair, PointPair>> witness;
};

InjectivityResult is_injective(const FiniteMetricSpace& space);

/// The r-isolated points { x : d(x, y) >= r for all y != x }.
std::vector<std::size_t> points_ge_r(const FiniteMetricSpace& space, const Rational& r);

struct StripFiltration {
  std::vector<Rational> thresholds;
  std::vector<std::vector<std::size_t>> layers;  // one per threshold
  std::vector<std::size_t> residue;
};

/// Repeatedly removes the r_t-isolated points of what remains, for each
/// threshold in turn. Thresholds must be positive and strictly decreasing.
StripFiltration isolation_strip(const FiniteMetricSpace& space, std::span<const Rational> thresholds);

} // namespace loometric

#pragma once

#include "loometric/metric_space.hpp"

#include <cstddef>
#include <vector>

namespace loometric {

/// A regular simplex inside a space: pairwise equidistant points.
struct SimplexWitness {
  std::vector<std::size_t> points;  // ascending, at least two
  Rational side;
  bool operator==(const SimplexWitness&) const = default;
};

/// Largest equidistant subset. Ties go to the smaller side length, then to
/// the lexicographically smaller point set. Throws Error(TooSmall) for
/// spaces with fewer than two points.
SimplexWitness max_regular_simplex(const FiniteMetricSpace& space);

/// Euclidean dimension any loose embedding needs: R^m holds at most m + 1
/// equidistant points and a loose embedding maps equidistant sets to
/// equidistant sets. 0 for spaces with fewer than two points.
std::size_t dim_lower_bound(const FiniteMetricSpace& space);

/// Lexicographically first maximum clique among cliques of size at least
/// `min_size`, or empty when none exists. `adjacency` is a symmetric n x n
/// 0/1 matrix in row-major order. Branch and bound with a greedy colouring
/// bound; vertices are branched in ascending order.
std::vector<std::size_t> max_clique(const std::vector<char>& adjacency, std::size_t n, std::size_t min_size = 1);

} // namespace loometric

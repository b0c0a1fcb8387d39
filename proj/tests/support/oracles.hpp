#pragma once

// Brute-force reference implementations. They share nothing with the
// library beyond FiniteMetricSpace, so agreement is meaningful.

#include "loometric/metric_space.hpp"
#include "loometric/random.hpp"

#include <optional>
#include <vector>

namespace oracle {

using loometric::FiniteMetricSpace;
using loometric::Rational;
using loometric::Rng;

// ---- random inputs ----

/// Integer distances drawn from [lo, 2 lo]; any such matrix is a metric,
/// and small ranges give many repeated distances.
FiniteMetricSpace random_band_space(Rng& rng, std::size_t n, long lo);

/// Euclidean points on a coarse grid with rounded-up distances; values
/// repeat rarely.
FiniteMetricSpace random_generic_space(Rng& rng, std::size_t n);

/// Either of the above, chosen at random, with sizes in [min_n, max_n].
FiniteMetricSpace random_space(Rng& rng, std::size_t min_n, std::size_t max_n);

/// Points equally spaced on a line (0, 1, ..., n-1) scaled by `step`.
FiniteMetricSpace line_space(std::size_t n, const Rational& step = 1);

// ---- metric axioms ----

/// True iff the matrix satisfies every triangle inequality (full triple scan).
bool triangles_hold(const std::vector<std::vector<Rational>>& m);

// ---- Gromov-Hausdorff ----

/// 2 d_GH by enumerating every relation (requires |X| * |Y| <= 24).
Rational gh_twice_by_relations(const FiniteMetricSpace& x, const FiniteMetricSpace& y);

/// 2 d_GH as the least t for which maps f: X -> Y and g: Y -> X exist with
/// distortion and codistortion at most t (backtracking over the candidate
/// values). Works up to about 7 points per side. With a hint, first tests
/// feasibility at the hint and infeasibility just below it, which settles
/// the answer in two searches when the hint is right.
Rational gh_twice_by_maps(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                          const std::optional<Rational>& hint = std::nullopt);

/// Picks whichever of the two above is feasible.
Rational gh_twice(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                  const std::optional<Rational>& hint = std::nullopt);

// ---- obstruction ----

struct Simplex {
  std::vector<std::size_t> points;
  Rational side;
};

/// Best equidistant subset over all subsets: largest, then smaller side,
/// then lexicographically smaller (n <= 16).
Simplex brute_simplex(const FiniteMetricSpace& space);

// ---- embeddings ----

/// Loose condition checked directly: for all pairs of pairs, source
/// distances are equal iff image squared distances are equal, and the map
/// is one-to-one.
bool loose_holds(const FiniteMetricSpace& space, const std::vector<std::vector<Rational>>& coords);

// ---- witness sets ----

/// Independent membership test for the separated-partition sets.
bool mnm_holds(const FiniteMetricSpace& space, const std::vector<std::vector<std::size_t>>& blocks,
               unsigned long n_inv, unsigned long m_inv);

/// Exhaustive search over all set partitions (n <= 9).
std::optional<std::vector<std::vector<std::size_t>>> brute_mnm(const FiniteMetricSpace& space, unsigned long n_inv,
                                                               unsigned long m_inv);

/// All set partitions of {0..n-1}, blocks in order of smallest element.
std::vector<std::vector<std::vector<std::size_t>>> set_partitions(std::size_t n);

} // namespace oracle

#pragma once

#include "loometric/metric_space.hpp"
#include "loometric/obstruction.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace loometric {

// ---------------------------------------------------------------------------
// Embeddings and the loose-embedding oracle
// ---------------------------------------------------------------------------

struct Unverified {
  bool operator==(const Unverified&) const = default;
};

struct VerifiedLoose {
  bool operator==(const VerifiedLoose&) const = default;
};

/// Why a map is not a loose embedding. For CoincidentPoints the two points
/// are first.i and first.j and `second` repeats `first`.
struct Violation {
  enum class Kind {
    CoincidentPoints,          // f is not one-to-one
    SourceEqualImageDiffers,   // d(first) == d(second) but |f first| != |f second|
    ImageEqualSourceDiffers,   // |f first| == |f second| but d(first) != d(second)
  };
  Kind kind;
  PointPair first;
  PointPair second;
  bool operator==(const Violation&) const = default;
};

using Verification = std::variant<Unverified, VerifiedLoose, Violation>;

/// A map into R^dim with exact rational coordinates, one row per point.
struct Embedding {
  std::size_t dim = 1;
  std::vector<std::vector<Rational>> coords;
  Verification status = Unverified{};

  bool verified() const { return std::holds_alternative<VerifiedLoose>(status); }
  bool operator==(const Embedding&) const = default;
};

Rational squared_distance(std::span<const Rational> a, std::span<const Rational> b);

/// Checks both directions of the loose condition over all pairs of pairs,
/// comparing exact squared Euclidean distances (x = y iff x^2 = y^2 for
/// non-negative reals). Throws Error(DimMismatch) if the coordinate table
/// does not match the space or `emb.dim`.
Embedding verify_loose(const FiniteMetricSpace& source, Embedding emb);

// ---------------------------------------------------------------------------
// Cluster hierarchy and the interval branching construction on the line
// ---------------------------------------------------------------------------

struct ClusterNode {
  std::vector<std::size_t> points;    // ascending
  Rational diameter;
  std::optional<std::size_t> parent;
  std::vector<std::size_t> children;  // node indices, ordered by smallest member
};

/// Nested partitions of the space. nodes[0] is the root; nodes are stored in
/// preorder.
struct ClusterTree {
  std::vector<ClusterNode> nodes;
  const ClusterNode& root() const { return nodes.front(); }
};

/// Splits each node into the connected components of "distance < diameter/2".
/// When that graph is connected (long chains) the node is split at its
/// longest single-linkage edge instead, so every non-singleton node has at
/// least two children. Empty spaces give an empty tree.
ClusterTree build_dendrogram(const FiniteMetricSpace& space);

/// Indices of the maximal nodes whose diameter is below `level` (> 0);
/// their point sets partition the space.
std::vector<std::size_t> cut_below(const ClusterTree& tree, const Rational& level);

struct Interval {
  Rational lo;
  Rational hi;
  bool operator==(const Interval&) const = default;
};

/// Interval per tree node, indexed like ClusterTree::nodes.
using IntervalAssignment = std::vector<Interval>;

struct BranchingOptions {
  std::size_t retries_per_node = 64;
  std::size_t global_retries = 16;
  std::uint64_t grid = std::uint64_t{1} << 20;  // resolution of random offsets
};

struct BranchingResult {
  ClusterTree tree;
  IntervalAssignment intervals;
  Embedding embedding;  // verified
};

/// Interval branching into R: every tree node gets a closed interval nested
/// in its parent's, siblings get disjoint intervals placed at random grid
/// offsets, and placements are redrawn until the cross-distance ranges of
/// distinct sibling pairs are disjoint. Points land at leaf midpoints.
/// Requires an injective distance (Error NotInjective); throws
/// Error(GenericityExhausted, {node}) if the retry budget runs out.
BranchingResult branching_construction(const FiniteMetricSpace& space, std::uint64_t seed,
                                       const BranchingOptions& options = {});

inline Embedding embed_line_branching(const FiniteMetricSpace& space, std::uint64_t seed,
                                      const BranchingOptions& options = {}) {
  return branching_construction(space, seed, options).embedding;
}

// ---------------------------------------------------------------------------
// Perturbation to an injective distance
// ---------------------------------------------------------------------------

struct PerturbOptions {
  std::uint64_t grid = std::uint64_t{1} << 32;
  std::size_t retries_per_entry = 64;
};

/// Returns a metric with pairwise distinct distances, each entry within
/// `eps` of the input. Every off-diagonal entry moves up by eps/2 plus a
/// seeded offset in [0, eps/2), which keeps the triangle inequality intact;
/// colliding entries are redrawn. Requires 0 < eps < (min distance)/4
/// (Error EpsTooLarge). Injective inputs are returned unchanged.
FiniteMetricSpace perturb_to_injective(const FiniteMetricSpace& space, const Rational& eps, std::uint64_t seed,
                                       const PerturbOptions& options = {});

// ---------------------------------------------------------------------------
// Numerical solver for R^n targets
// ---------------------------------------------------------------------------

/// Penalty over point coordinates x (points x dim, row-major) followed by
/// one squared target length t_b per distance class:
///
///   sum_pairs (|x_i - x_j|^2 - t_b(ij))^2
///   + sum_{b < c} max(0, margin - |t_b - t_c|)^2
///   + sum_b max(0, margin - t_b)^2
class LoosePenalty {
public:
  LoosePenalty(const DistancePattern& pattern, std::size_t dim, double margin);

  std::size_t num_variables() const { return points_ * dim_ + classes_; }
  std::size_t points() const { return points_; }
  std::size_t dim() const { return dim_; }
  std::size_t classes() const { return classes_; }
  double margin() const { return margin_; }

  double value(std::span<const double> vars) const;
  /// Writes the analytic gradient into `grad` and returns the value.
  double value_and_gradient(std::span<const double> vars, std::span<double> grad) const;

private:
  std::size_t points_;
  std::size_t dim_;
  std::size_t classes_;
  double margin_;
  std::vector<PointPair> pairs_;
  std::vector<std::size_t> class_of_;
};

/// (min gap between consecutive class values) / 10, at least 1e-3.
double default_margin(const DistancePattern& pattern);

/// Exact loose embedding with integer coordinates and no numerics: one axis
/// per point pair, carrying +w and -w at its endpoints where w is the rank
/// of the pair's distance class, plus at most four private axes per point
/// that equalize squared norms (sums of squares). Image squared distances
/// are 2K + 2w^2. Dimension is at most n(n-1)/2 + 4n, usually far less
/// than that on the private side.
Embedding incidence_embedding(const FiniteMetricSpace& space);

struct SolverOptions {
  std::optional<double> margin;
  std::size_t max_iters = 3000;
  std::size_t restarts = 16;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

struct InfeasibleReport {
  std::optional<double> best_residual;           // absent when certified up front
  std::optional<SimplexWitness> certificate;     // present when dim_lower_bound > dim
  std::size_t restarts_run = 0;
  bool operator==(const InfeasibleReport&) const = default;
};

using SolveResult = std::variant<Embedding, InfeasibleReport>;

/// Searches for a loose embedding into R^dim. Injective spaces go through
/// the line construction; spaces whose simplex bound exceeds dim are
/// rejected with the simplex as certificate; when dim >= n(n-1)/2 and
/// incidence_embedding fits, it is returned. Otherwise runs seeded restarts
/// of gradient descent on LoosePenalty and rationalizes each converged
/// configuration; only configurations that pass verify_loose exactly are
/// returned. With threads > 1, restarts run in parallel batches and the
/// lowest successful restart index wins, so the output does not depend on
/// the thread count.
SolveResult solve_loose_embedding(const FiniteMetricSpace& space, std::size_t dim, const SolverOptions& options = {});

} // namespace loometric

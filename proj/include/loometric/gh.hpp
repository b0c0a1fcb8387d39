#pragma once

#include "loometric/metric_space.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace loometric {

// ---------------------------------------------------------------------------
// Hausdorff and Gromov-Hausdorff distances
// ---------------------------------------------------------------------------

/// Relation between the points of X and Y, sorted, covering both sides.
using Correspondence = std::vector<std::pair<std::size_t, std::size_t>>;

bool is_correspondence(const Correspondence& r, std::size_t x_size, std::size_t y_size);

/// max over related (x, y), (x', y') of |d_X(x, x') - d_Y(y, y')|.
Rational distortion(const FiniteMetricSpace& x, const FiniteMetricSpace& y, const Correspondence& r);

/// Distortion of the identity correspondence between two spaces on the same
/// number of points: max_ij |d_X(i,j) - d_Y(i,j)|. Half of it bounds d_GH.
Rational identity_distortion(const FiniteMetricSpace& x, const FiniteMetricSpace& y);

/// Hausdorff distance between two nonempty point subsets of one space.
Rational hausdorff(const FiniteMetricSpace& ambient, std::span<const std::size_t> a, std::span<const std::size_t> b);

struct GhBounds {
  Rational lower;
  Rational upper;
  Correspondence upper_witness;
};

/// Cheap bracket for d_GH. Lower bound: half the largest of the diameter
/// gap, the Hausdorff distance between the two sets of distance values, and
/// the Hausdorff distance between the two sets of eccentricities (each is a
/// value every correspondence's distortion must reach). Upper bound: half
/// the distortion of a greedy correspondence.
GhBounds gh_bounds(const FiniteMetricSpace& x, const FiniteMetricSpace& y);

struct GhResult {
  Rational value;                 // exact value, or the best upper bound found
  Correspondence correspondence;  // realizes 2 * value
  bool exact = false;
  Rational lower;
  Rational upper;
  std::uint64_t nodes = 0;
};

/// d_GH as half the minimal distortion over correspondences, by branch and
/// bound over the image sets of the X points (points ordered by decreasing
/// eccentricity; admissible bounds only). When `budget` nodes are exhausted
/// the result carries the incumbent as upper bound and exact = false.
/// The reported optimal correspondence is canonical: the smallest in the
/// order that compares the image sets of x = 0, 1, ... as sorted vectors.
GhResult gh_exact(const FiniteMetricSpace& x, const FiniteMetricSpace& y, std::uint64_t budget = 20'000'000);

// ---------------------------------------------------------------------------
// Partition and cover witnesses
// ---------------------------------------------------------------------------

using Partition = std::vector<std::vector<std::size_t>>;
using Cover = std::vector<std::vector<std::size_t>>;

/// Largest diameter of a member; 0 for empty families.
Rational mesh(const FiniteMetricSpace& space, const std::vector<std::vector<std::size_t>>& family);

struct MnmViolation {
  enum class Kind { Mesh, Separation };
  Kind kind;
  // Mesh: block index and a diameter-realizing pair.
  // Separation: the two block pairs and the points x, y, x', y' with
  // |d(x,y) - d(x',y')| <= 1/M.
  std::vector<std::size_t> blocks;
  std::vector<std::size_t> points;
};

struct MnmCheck {
  bool holds = true;
  std::optional<MnmViolation> violation;
};

/// Membership test for the injectivity witness sets: every block has
/// diameter < 1/N, and cross distances of distinct unordered block pairs
/// differ by more than 1/M. Throws Error(NotAPartition).
MnmCheck check_mnm(const FiniteMetricSpace& space, const Partition& partition, std::uint64_t n_inv,
                   std::uint64_t m_inv);

enum class WitnessKind { Injectivity, Dimension };

struct PartitionWitness {
  Partition blocks;
  std::uint64_t n_inv = 1;
  std::uint64_t m_inv = 1;
  WitnessKind kind = WitnessKind::Injectivity;
  std::optional<std::size_t> order_bound;  // dimension witnesses only
  std::string search_space = "dendrogram-cuts";
};

/// Tries, in order: the horizontal cuts of build_dendrogram with mesh
/// < 1/N (coarsest first), an exact two-block split, and for spaces of at
/// most `exhaustive_limit` points a pruned search over all partitions. The
/// witness records which one succeeded. For larger spaces nullopt does not
/// prove that no witness exists.
std::optional<PartitionWitness> find_mnm_partition(const FiniteMetricSpace& space, std::uint64_t n_inv,
                                                   std::uint64_t m_inv, std::size_t exhaustive_limit = 10);

/// Largest k such that some k + 1 members share a point (-1 for the empty
/// space). Throws Error(NotACover) if the members do not cover the space.
int cover_order(const FiniteMetricSpace& space, const Cover& cover);

struct DimensionViolation {
  enum class Kind { Mesh, Separation };
  Kind kind;
  std::vector<std::size_t> members;  // Mesh: {member}; Separation: subfamily, with U first
  std::vector<std::size_t> points;   // Mesh: diameter pair; Separation: {x, y}
};

struct DimensionCheck {
  bool holds = true;
  std::optional<DimensionViolation> violation;
};

/// Membership test for the dimension witness sets: mesh < 1/N, and for each
/// subfamily V of n + 2 members and each U in V, every x in U is farther
/// than 1/M from every y in the intersection of V \ {U} (vacuous when that
/// intersection is empty).
DimensionCheck check_dimension_witness(const FiniteMetricSpace& space, const Cover& cover, std::uint64_t n_inv,
                                       std::uint64_t m_inv, std::size_t order);

} // namespace loometric

#include "loometric/embed.hpp"
#include "loometric/random.hpp"

#include <algorithm>
#include <numeric>

namespace loometric {

namespace {

Rational grid_fraction(Rng& rng, std::uint64_t grid, std::uint64_t lo, std::uint64_t hi) {
  // uniform grid point in [lo/grid, hi/grid]
  Rational r(static_cast<unsigned long>(lo + rng.below(hi - lo + 1)), static_cast<unsigned long>(grid));
  r.canonicalize();
  return r;
}

// True when the ranges of cross distances { |x - y| : x in I_a, y in I_b }
// of distinct sibling pairs {a, b} are pairwise disjoint.
bool generic_siblings(const std::vector<Interval>& siblings) {
  struct Range {
    Rational lo, hi;
  };
  std::vector<Range> ranges;
  for (std::size_t a = 0; a < siblings.size(); ++a) {
    for (std::size_t b = a + 1; b < siblings.size(); ++b) {
      const Interval& left = siblings[a].lo < siblings[b].lo ? siblings[a] : siblings[b];
      const Interval& right = siblings[a].lo < siblings[b].lo ? siblings[b] : siblings[a];
      ranges.push_back({right.lo - left.hi, right.hi - left.lo});
    }
  }
  std::sort(ranges.begin(), ranges.end(), [](const Range& x, const Range& y) { return x.lo < y.lo; });
  for (std::size_t k = 1; k < ranges.size(); ++k)
    if (ranges[k].lo <= ranges[k - 1].hi) return false;
  return true;
}

bool disjoint_and_nested(const std::vector<Interval>& siblings, const Interval& parent) {
  std::vector<Interval> sorted = siblings;
  std::sort(sorted.begin(), sorted.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (sorted[k].lo <= parent.lo || sorted[k].hi >= parent.hi || sorted[k].lo >= sorted[k].hi) return false;
    if (k > 0 && sorted[k].lo <= sorted[k - 1].hi) return false;
  }
  return true;
}

// Child intervals for one node: k equal slots in random order, a random
// centre in the middle half of each slot, and a common half-width small
// enough that distinct centre distances keep their cross-distance ranges
// apart.
std::optional<std::vector<Interval>> place_children(const Interval& parent, std::size_t k, Rng& rng,
                                                    const BranchingOptions& options) {
  const Rational width = (parent.hi - parent.lo) / Rational(static_cast<unsigned long>(k));
  std::vector<std::size_t> slot(k);
  std::iota(slot.begin(), slot.end(), 0);
  for (std::size_t t = k; t > 1; --t) std::swap(slot[t - 1], slot[rng.below(t)]);

  std::vector<Rational> centre(k);
  for (std::size_t c = 0; c < k; ++c) {
    const Rational offset = grid_fraction(rng, options.grid, options.grid / 4, 3 * options.grid / 4);
    centre[c] = parent.lo + width * Rational(static_cast<unsigned long>(slot[c])) + width * offset;
  }

  std::vector<Rational> gaps;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b) gaps.push_back(abs_diff(centre[a], centre[b]));
  std::sort(gaps.begin(), gaps.end());
  Rational half = width / 8;
  for (std::size_t t = 1; t < gaps.size(); ++t) {
    const Rational g = gaps[t] - gaps[t - 1];
    if (g == 0) return std::nullopt;
    if (g / 8 < half) half = g / 8;
  }

  std::vector<Interval> out(k);
  for (std::size_t c = 0; c < k; ++c) out[c] = {centre[c] - half, centre[c] + half};
  return out;
}

} // namespace

BranchingResult branching_construction(const FiniteMetricSpace& space, std::uint64_t seed,
                                       const BranchingOptions& options) {
  if (options.grid < 8) throw Error(Errc::InvalidArgument, "branching grid is too coarse");
  const auto injectivity = is_injective(space);
  if (!injectivity.injective) {
    const auto& [p, q] = *injectivity.witness;
    throw Error(Errc::NotInjective, {p.i, p.j, q.i, q.j}, "distance is not injective");
  }

  BranchingResult result;
  result.tree = build_dendrogram(space);
  const std::size_t n = space.size();
  result.embedding.dim = 1;
  if (n == 0) {
    result.embedding.status = VerifiedLoose{};
    return result;
  }

  Rng rng(seed);
  const auto& nodes = result.tree.nodes;
  for (std::size_t round = 0; round < options.global_retries; ++round) {
    IntervalAssignment intervals(nodes.size());
    intervals[0] = {Rational(0), Rational(1)};
    for (std::size_t id = 0; id < nodes.size(); ++id) {
      const auto& children = nodes[id].children;
      if (children.empty()) continue;
      std::optional<std::vector<Interval>> placed;
      for (std::size_t attempt = 0; attempt < options.retries_per_node; ++attempt) {
        placed = place_children(intervals[id], children.size(), rng, options);
        if (placed && disjoint_and_nested(*placed, intervals[id]) && generic_siblings(*placed)) break;
        placed.reset();
      }
      if (!placed) throw Error(Errc::GenericityExhausted, {id}, "no generic placement for node " + std::to_string(id));
      for (std::size_t c = 0; c < children.size(); ++c) intervals[children[c]] = (*placed)[c];
    }

    Embedding emb;
    emb.dim = 1;
    emb.coords.assign(n, std::vector<Rational>(1));
    for (std::size_t id = 0; id < nodes.size(); ++id) {
      if (!nodes[id].children.empty()) continue;
      emb.coords[nodes[id].points.front()][0] = (intervals[id].lo + intervals[id].hi) / 2;
    }
    emb = verify_loose(space, std::move(emb));
    if (emb.verified()) {
      result.intervals = std::move(intervals);
      result.embedding = std::move(emb);
      return result;
    }
  }
  throw Error(Errc::GenericityExhausted, {0}, "cross-level coincidences persisted after all retries");
}

} // namespace loometric

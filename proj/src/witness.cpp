#include "loometric/embed.hpp"
#include "loometric/gh.hpp"

#include <algorithm>
#include <numeric>

namespace loometric {

namespace {

Rational reciprocal(std::uint64_t k, const char* name) {
  if (k == 0) throw Error(Errc::InvalidArgument, std::string(name) + " must be a positive integer");
  return Rational(1, static_cast<unsigned long>(k));
}

struct Diameter {
  Rational value = 0;
  std::size_t a = 0, b = 0;
};

Diameter diameter_of(const FiniteMetricSpace& space, const std::vector<std::size_t>& members) {
  Diameter d;
  if (!members.empty()) d.a = d.b = members.front();
  for (std::size_t s = 0; s < members.size(); ++s)
    for (std::size_t t = s + 1; t < members.size(); ++t)
      if (space(members[s], members[t]) > d.value) d = {space(members[s], members[t]), members[s], members[t]};
  return d;
}

void check_indices(const FiniteMetricSpace& space, const std::vector<std::vector<std::size_t>>& family, Errc code) {
  for (std::size_t m = 0; m < family.size(); ++m)
    for (auto p : family[m])
      if (p >= space.size()) throw Error(code, {m, p}, "member " + std::to_string(m) + " has an out-of-range point");
}

struct CrossValue {
  Rational d;
  std::size_t x, y;
};

} // namespace

Rational mesh(const FiniteMetricSpace& space, const std::vector<std::vector<std::size_t>>& family) {
  Rational worst = 0;
  for (const auto& member : family) {
    Rational d = diameter_of(space, member).value;
    if (d > worst) worst = d;
  }
  return worst;
}

MnmCheck check_mnm(const FiniteMetricSpace& space, const Partition& partition, std::uint64_t n_inv,
                   std::uint64_t m_inv) {
  const Rational mesh_limit = reciprocal(n_inv, "N");
  const Rational gap_limit = reciprocal(m_inv, "M");
  check_indices(space, partition, Errc::NotAPartition);
  std::vector<std::size_t> seen(space.size(), 0);
  for (std::size_t b = 0; b < partition.size(); ++b) {
    if (partition[b].empty()) throw Error(Errc::NotAPartition, {b}, "block " + std::to_string(b) + " is empty");
    for (auto p : partition[b]) {
      if (seen[p]++) throw Error(Errc::NotAPartition, {p}, "point " + std::to_string(p) + " is in two blocks");
    }
  }
  for (std::size_t p = 0; p < space.size(); ++p)
    if (!seen[p]) throw Error(Errc::NotAPartition, {p}, "point " + std::to_string(p) + " is in no block");

  MnmCheck result;
  for (std::size_t b = 0; b < partition.size(); ++b) {
    const auto d = diameter_of(space, partition[b]);
    if (d.value >= mesh_limit) {
      result.holds = false;
      result.violation = MnmViolation{MnmViolation::Kind::Mesh, {b}, {d.a, d.b}};
      return result;
    }
  }

  // cross distances per unordered block pair, sorted by value
  struct BlockPair {
    std::size_t u, v;
    std::vector<CrossValue> values;
  };
  std::vector<BlockPair> block_pairs;
  for (std::size_t u = 0; u < partition.size(); ++u) {
    for (std::size_t v = u + 1; v < partition.size(); ++v) {
      BlockPair bp{u, v, {}};
      for (auto x : partition[u])
        for (auto y : partition[v]) bp.values.push_back({space(x, y), x, y});
      std::sort(bp.values.begin(), bp.values.end(), [](const CrossValue& p, const CrossValue& q) { return p.d < q.d; });
      block_pairs.push_back(std::move(bp));
    }
  }

  for (std::size_t s = 0; s < block_pairs.size(); ++s) {
    for (std::size_t t = s + 1; t < block_pairs.size(); ++t) {
      const auto& p = block_pairs[s].values;
      const auto& q = block_pairs[t].values;
      if (q.front().d - p.back().d > gap_limit || p.front().d - q.back().d > gap_limit) continue;
      // closest values of two sorted lists
      std::size_t i = 0, j = 0, bi = 0, bj = 0;
      Rational best = abs_diff(p[0].d, q[0].d);
      while (i < p.size() && j < q.size()) {
        Rational g = abs_diff(p[i].d, q[j].d);
        if (g < best) {
          best = g;
          bi = i;
          bj = j;
        }
        if (p[i].d < q[j].d) ++i; else ++j;
      }
      if (best <= gap_limit) {
        result.holds = false;
        result.violation = MnmViolation{MnmViolation::Kind::Separation,
                                        {block_pairs[s].u, block_pairs[s].v, block_pairs[t].u, block_pairs[t].v},
                                        {p[bi].x, p[bi].y, q[bj].x, q[bj].y}};
        return result;
      }
    }
  }
  return result;
}

namespace {

// Two blocks of diameter < limit exist iff the graph of pairs at distance
// >= limit is bipartite; separation is vacuous with a single block pair.
std::optional<Partition> two_block_partition(const FiniteMetricSpace& space, const Rational& limit) {
  const std::size_t n = space.size();
  std::vector<int> colour(n, -1);
  bool any_edge = false;
  for (std::size_t s = 0; s < n; ++s) {
    if (colour[s] >= 0) continue;
    colour[s] = 0;
    std::vector<std::size_t> stack{s};
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < n; ++v) {
        if (v == u || space(u, v) < limit) continue;
        any_edge = true;
        if (colour[v] < 0) {
          colour[v] = 1 - colour[u];
          stack.push_back(v);
        } else if (colour[v] == colour[u]) {
          return std::nullopt;
        }
      }
    }
  }
  if (!any_edge) return std::nullopt;
  Partition blocks(2);
  for (std::size_t p = 0; p < n; ++p) blocks[static_cast<std::size_t>(colour[p])].push_back(p);
  return blocks;
}

// Depth-first search over restricted growth strings. Each new point is
// checked against its block's diameter and against every cross distance
// already committed to a different block pair.
class PartitionSearch {
public:
  PartitionSearch(const FiniteMetricSpace& space, Rational mesh_limit, Rational gap_limit)
      : space_(space), mesh_(std::move(mesh_limit)), gap_(std::move(gap_limit)), block_of_(space.size()) {}

  std::optional<Partition> run() {
    if (!extend(0)) return std::nullopt;
    return blocks_;
  }

private:
  struct Cross {
    Rational d;
    std::size_t u, v;  // blocks, u < v
  };

  bool extend(std::size_t p) {
    if (p == space_.size()) return true;
    for (std::size_t b = 0; b <= blocks_.size(); ++b) {
      if (!fits(p, b)) continue;
      const std::size_t mark = cross_.size();
      if (b == blocks_.size()) blocks_.emplace_back();
      for (std::size_t q = 0; q < p; ++q)
        if (block_of_[q] != b) cross_.push_back({space_(p, q), std::min(b, block_of_[q]), std::max(b, block_of_[q])});
      blocks_[b].push_back(p);
      block_of_[p] = b;
      if (extend(p + 1)) return true;
      blocks_[b].pop_back();
      if (blocks_[b].empty()) blocks_.pop_back();
      cross_.resize(mark);
    }
    return false;
  }

  bool fits(std::size_t p, std::size_t b) const {
    if (b < blocks_.size())
      for (auto q : blocks_[b])
        if (space_(p, q) >= mesh_) return false;
    std::vector<Cross> fresh;
    for (std::size_t q = 0; q < p; ++q) {
      if (block_of_[q] == b) continue;
      fresh.push_back({space_(p, q), std::min(b, block_of_[q]), std::max(b, block_of_[q])});
    }
    for (std::size_t s = 0; s < fresh.size(); ++s) {
      for (const auto& c : cross_)
        if ((c.u != fresh[s].u || c.v != fresh[s].v) && abs_diff(c.d, fresh[s].d) <= gap_) return false;
      for (std::size_t t = 0; t < s; ++t)
        if ((fresh[t].u != fresh[s].u || fresh[t].v != fresh[s].v) && abs_diff(fresh[t].d, fresh[s].d) <= gap_)
          return false;
    }
    return true;
  }

  const FiniteMetricSpace& space_;
  Rational mesh_;
  Rational gap_;
  std::vector<std::size_t> block_of_;
  Partition blocks_;
  std::vector<Cross> cross_;
};

} // namespace

std::optional<PartitionWitness> find_mnm_partition(const FiniteMetricSpace& space, std::uint64_t n_inv,
                                                   std::uint64_t m_inv, std::size_t exhaustive_limit) {
  const Rational mesh_limit = reciprocal(n_inv, "N");
  const Rational gap_limit = reciprocal(m_inv, "M");
  auto witness = [&](Partition blocks, const char* search) {
    return PartitionWitness{std::move(blocks), n_inv, m_inv, WitnessKind::Injectivity, std::nullopt, search};
  };
  if (space.empty()) return witness({}, "dendrogram-cuts");

  const ClusterTree tree = build_dendrogram(space);
  std::vector<Rational> levels{mesh_limit};
  for (const auto& node : tree.nodes)
    if (node.diameter > 0 && node.diameter < mesh_limit) levels.push_back(node.diameter);
  std::sort(levels.begin(), levels.end(), [](const Rational& a, const Rational& b) { return a > b; });
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  std::optional<Partition> previous;
  for (const auto& level : levels) {
    Partition blocks;
    for (auto id : cut_below(tree, level)) blocks.push_back(tree.nodes[id].points);
    if (previous && *previous == blocks) continue;
    if (check_mnm(space, blocks, n_inv, m_inv).holds) return witness(std::move(blocks), "dendrogram-cuts");
    previous = std::move(blocks);
  }

  if (auto blocks = two_block_partition(space, mesh_limit)) return witness(std::move(*blocks), "two-block");

  if (space.size() <= exhaustive_limit) {
    if (auto blocks = PartitionSearch(space, mesh_limit, gap_limit).run()) {
      return witness(std::move(*blocks), "exhaustive");
    }
  }
  return std::nullopt;
}

int cover_order(const FiniteMetricSpace& space, const Cover& cover) {
  check_indices(space, cover, Errc::NotACover);
  std::vector<int> count(space.size(), 0);
  for (const auto& member : cover) {
    std::vector<std::size_t> unique = member;
    std::sort(unique.begin(), unique.end());
    unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
    for (auto p : unique) ++count[p];
  }
  for (std::size_t p = 0; p < space.size(); ++p)
    if (count[p] == 0) throw Error(Errc::NotACover, {p}, "point " + std::to_string(p) + " is not covered");
  if (space.empty()) return -1;
  return *std::max_element(count.begin(), count.end()) - 1;
}

DimensionCheck check_dimension_witness(const FiniteMetricSpace& space, const Cover& cover, std::uint64_t n_inv,
                                       std::uint64_t m_inv, std::size_t order) {
  const Rational mesh_limit = reciprocal(n_inv, "N");
  const Rational sep_limit = reciprocal(m_inv, "M");
  cover_order(space, cover);  // validates

  DimensionCheck result;
  for (std::size_t m = 0; m < cover.size(); ++m) {
    const auto d = diameter_of(space, cover[m]);
    if (d.value >= mesh_limit) {
      result.holds = false;
      result.violation = DimensionViolation{DimensionViolation::Kind::Mesh, {m}, {d.a, d.b}};
      return result;
    }
  }

  std::vector<std::vector<char>> member_of(cover.size(), std::vector<char>(space.size(), 0));
  for (std::size_t m = 0; m < cover.size(); ++m)
    for (auto p : cover[m]) member_of[m][p] = 1;

  const std::size_t k = order + 2;
  if (cover.size() < k) return result;
  std::vector<std::size_t> family(k);
  std::iota(family.begin(), family.end(), 0);
  for (;;) {
    for (std::size_t u = 0; u < k; ++u) {
      std::vector<std::size_t> meet;
      for (std::size_t p = 0; p < space.size(); ++p) {
        bool in_all = true;
        for (std::size_t v = 0; v < k && in_all; ++v)
          if (v != u && !member_of[family[v]][p]) in_all = false;
        if (in_all) meet.push_back(p);
      }
      for (auto x : cover[family[u]]) {
        for (auto y : meet) {
          if (space(x, y) <= sep_limit) {
            std::vector<std::size_t> members{family[u]};
            for (std::size_t v = 0; v < k; ++v)
              if (v != u) members.push_back(family[v]);
            result.holds = false;
            result.violation = DimensionViolation{DimensionViolation::Kind::Separation, std::move(members), {x, y}};
            return result;
          }
        }
      }
    }
    // next k-combination of cover indices
    std::size_t i = k;
    while (i > 0 && family[i - 1] == cover.size() - k + i - 1) --i;
    if (i == 0) break;
    ++family[i - 1];
    for (std::size_t j = i; j < k; ++j) family[j] = family[j - 1] + 1;
  }
  return result;
}

} // namespace loometric

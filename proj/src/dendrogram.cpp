#include "loometric/embed.hpp"

#include <algorithm>
#include <numeric>

namespace loometric {

namespace {

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> parent;
};

// Components of `points` under the relation d < threshold, each ascending,
// ordered by smallest member.
std::vector<std::vector<std::size_t>> components_below(const FiniteMetricSpace& space,
                                                       const std::vector<std::size_t>& points,
                                                       const Rational& threshold) {
  const std::size_t m = points.size();
  DisjointSets sets(m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      if (space(points[a], points[b]) < threshold) sets.unite(a, b);
  std::vector<std::vector<std::size_t>> groups(m);
  for (std::size_t a = 0; a < m; ++a) groups[sets.find(a)].push_back(points[a]);
  std::erase_if(groups, [](const auto& g) { return g.empty(); });
  return groups;  // roots are the smallest local index, so already ordered
}

// Longest edge of a minimum spanning tree (Prim).
Rational longest_mst_edge(const FiniteMetricSpace& space, const std::vector<std::size_t>& points) {
  const std::size_t m = points.size();
  std::vector<char> in_tree(m, 0);
  std::vector<Rational> best(m);
  Rational longest = 0;
  in_tree[0] = 1;
  for (std::size_t b = 1; b < m; ++b) best[b] = space(points[0], points[b]);
  for (std::size_t step = 1; step < m; ++step) {
    std::size_t next = m;
    for (std::size_t b = 0; b < m; ++b)
      if (!in_tree[b] && (next == m || best[b] < best[next])) next = b;
    if (best[next] > longest) longest = best[next];
    in_tree[next] = 1;
    for (std::size_t b = 0; b < m; ++b)
      if (!in_tree[b] && space(points[next], points[b]) < best[b]) best[b] = space(points[next], points[b]);
  }
  return longest;
}

Rational diameter_of(const FiniteMetricSpace& space, const std::vector<std::size_t>& points) {
  Rational d = 0;
  for (std::size_t a = 0; a < points.size(); ++a)
    for (std::size_t b = a + 1; b < points.size(); ++b)
      if (space(points[a], points[b]) > d) d = space(points[a], points[b]);
  return d;
}

void grow(const FiniteMetricSpace& space, ClusterTree& tree, std::vector<std::size_t> points,
          std::optional<std::size_t> parent) {
  const std::size_t id = tree.nodes.size();
  tree.nodes.push_back({points, diameter_of(space, points), parent, {}});
  if (parent) tree.nodes[*parent].children.push_back(id);
  if (points.size() < 2) return;

  auto parts = components_below(space, points, tree.nodes[id].diameter / 2);
  if (parts.size() < 2) parts = components_below(space, points, longest_mst_edge(space, points));
  for (auto& part : parts) grow(space, tree, std::move(part), id);
}

} // namespace

ClusterTree build_dendrogram(const FiniteMetricSpace& space) {
  ClusterTree tree;
  if (space.empty()) return tree;
  std::vector<std::size_t> all(space.size());
  std::iota(all.begin(), all.end(), 0);
  grow(space, tree, std::move(all), std::nullopt);
  return tree;
}

std::vector<std::size_t> cut_below(const ClusterTree& tree, const Rational& level) {
  if (level <= 0) throw Error(Errc::InvalidArgument, "cut level must be positive");
  std::vector<std::size_t> cut;
  if (tree.nodes.empty()) return cut;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const std::size_t id = stack.back();
    stack.pop_back();
    const auto& node = tree.nodes[id];
    if (node.diameter < level) {
      cut.push_back(id);
      continue;
    }
    for (auto it = node.children.rbegin(); it != node.children.rend(); ++it) stack.push_back(*it);
  }
  return cut;
}

} // namespace loometric

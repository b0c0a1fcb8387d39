#include "loometric/obstruction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace loometric {

namespace {

class CliqueSearch {
public:
  CliqueSearch(const std::vector<char>& adjacency, std::size_t n, std::size_t min_size)
      : adj_(adjacency), n_(n), target_(std::max<std::size_t>(min_size, 1)) {}

  std::vector<std::size_t> run() {
    std::vector<std::size_t> candidates(n_);
    std::iota(candidates.begin(), candidates.end(), 0);
    expand(candidates);
    return best_;
  }

private:
  bool adjacent(std::size_t a, std::size_t b) const { return adj_[a * n_ + b] != 0; }

  // suffix_bound[k]: colours used by a greedy colouring of candidates[k..],
  // coloured from the back so every suffix gets a valid colouring.
  std::vector<std::size_t> suffix_bounds(const std::vector<std::size_t>& candidates) const {
    const std::size_t m = candidates.size();
    std::vector<std::size_t> bound(m);
    std::vector<std::vector<std::size_t>> colour_classes;
    for (std::size_t k = m; k-- > 0;) {
      const std::size_t v = candidates[k];
      auto fits = [&](const std::vector<std::size_t>& cls) {
        return std::none_of(cls.begin(), cls.end(), [&](std::size_t w) { return adjacent(v, w); });
      };
      auto it = std::find_if(colour_classes.begin(), colour_classes.end(), fits);
      if (it == colour_classes.end()) {
        colour_classes.push_back({v});
      } else {
        it->push_back(v);
      }
      bound[k] = colour_classes.size();
    }
    return bound;
  }

  void expand(const std::vector<std::size_t>& candidates) {
    const auto bound = suffix_bounds(candidates);
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      if (current_.size() + bound[k] < target_) return;
      const std::size_t v = candidates[k];
      current_.push_back(v);
      std::vector<std::size_t> next;
      for (std::size_t t = k + 1; t < candidates.size(); ++t)
        if (adjacent(v, candidates[t])) next.push_back(candidates[t]);
      if (next.empty()) {
        if (current_.size() >= target_) {
          best_ = current_;
          target_ = current_.size() + 1;
        }
      } else {
        expand(next);
      }
      current_.pop_back();
    }
  }

  const std::vector<char>& adj_;
  std::size_t n_;
  std::size_t target_;
  std::vector<std::size_t> current_;
  std::vector<std::size_t> best_;
};

// Largest k with k(k-1)/2 <= edges.
std::size_t clique_bound_from_edges(std::size_t edges) {
  auto k = static_cast<std::size_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(edges))) / 2.0);
  while (k * (k - 1) / 2 > edges) --k;
  while ((k + 1) * k / 2 <= edges) ++k;
  return k;
}

} // namespace

std::vector<std::size_t> max_clique(const std::vector<char>& adjacency, std::size_t n, std::size_t min_size) {
  if (adjacency.size() != n * n) throw Error(Errc::InvalidArgument, "adjacency matrix has wrong size");
  return CliqueSearch(adjacency, n, min_size).run();
}

SimplexWitness max_regular_simplex(const FiniteMetricSpace& space) {
  const std::size_t n = space.size();
  if (n < 2) throw Error(Errc::TooSmall, "a regular simplex needs at least two points");

  const auto pattern = distance_pattern(space);
  if (pattern.classes.size() == 1) {
    SimplexWitness all{std::vector<std::size_t>(n), pattern.classes[0].value};
    std::iota(all.points.begin(), all.points.end(), 0);
    return all;
  }

  // Any single pair is a 1-simplex; start from the shortest.
  const auto& shortest = pattern.classes.front();
  SimplexWitness best{{shortest.pairs[0].i, shortest.pairs[0].j}, shortest.value};

  std::vector<std::size_t> order(pattern.classes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pattern.classes[a].pairs.size() > pattern.classes[b].pairs.size();
  });

  for (std::size_t c : order) {
    const auto& cls = pattern.classes[c];
    const std::size_t edge_bound = clique_bound_from_edges(cls.pairs.size());
    if (edge_bound < best.points.size()) break;  // later classes have no more pairs

    std::vector<std::size_t> vertices;
    for (const auto& p : cls.pairs) {
      vertices.push_back(p.i);
      vertices.push_back(p.j);
    }
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());

    const std::size_t bound = std::min(edge_bound, vertices.size());
    const bool smaller_side = cls.value < best.side;
    const std::size_t target = best.points.size() + (smaller_side ? 0 : 1);
    if (bound < target) continue;

    const std::size_t m = vertices.size();
    std::vector<char> adj(m * m, 0);
    auto local = [&](std::size_t v) {
      return static_cast<std::size_t>(std::lower_bound(vertices.begin(), vertices.end(), v) - vertices.begin());
    };
    for (const auto& p : cls.pairs) {
      const std::size_t a = local(p.i), b = local(p.j);
      adj[a * m + b] = adj[b * m + a] = 1;
    }
    const auto clique = max_clique(adj, m, target);
    if (clique.empty()) continue;
    best.points.clear();
    for (std::size_t v : clique) best.points.push_back(vertices[v]);
    best.side = cls.value;
  }
  return best;
}

std::size_t dim_lower_bound(const FiniteMetricSpace& space) {
  if (space.size() < 2) return 0;
  return max_regular_simplex(space).points.size() - 1;
}

} // namespace loometric

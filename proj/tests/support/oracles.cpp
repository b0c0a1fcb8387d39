#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>

namespace oracle {

namespace {

std::vector<std::vector<Rational>> zero_matrix(std::size_t n) {
  return std::vector<std::vector<Rational>>(n, std::vector<Rational>(n, 0));
}

std::uint64_t isqrt_ceil(std::uint64_t v) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r * r == v ? r : r + 1;
}

// Rank table of |dX(a,b) - dY(c,d)| over all index quadruples.
struct DiffRanks {
  std::size_t nx, ny;
  std::vector<Rational> values;  // sorted distinct
  std::vector<std::uint16_t> rank;

  DiffRanks(const FiniteMetricSpace& x, const FiniteMetricSpace& y) : nx(x.size()), ny(y.size()) {
    std::vector<Rational> all;
    for (std::size_t a = 0; a < nx; ++a)
      for (std::size_t b = 0; b < nx; ++b)
        for (std::size_t c = 0; c < ny; ++c)
          for (std::size_t d = 0; d < ny; ++d) all.push_back(abs(x(a, b) - y(c, d)));
    values = all;
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    rank.reserve(all.size());
    for (const auto& v : all)
      rank.push_back(static_cast<std::uint16_t>(std::lower_bound(values.begin(), values.end(), v) - values.begin()));
  }

  std::uint16_t operator()(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
    return rank[((a * nx + b) * ny + c) * ny + d];
  }
};

} // namespace

FiniteMetricSpace random_band_space(Rng& rng, std::size_t n, long lo) {
  auto m = zero_matrix(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const long v = lo + static_cast<long>(rng.below(static_cast<std::uint64_t>(lo) + 1));
      m[i][j] = m[j][i] = v;
    }
  return loometric::validate_metric(m);
}

FiniteMetricSpace random_generic_space(Rng& rng, std::size_t n) {
  constexpr std::uint64_t k = 100;
  std::vector<std::pair<std::int64_t, std::int64_t>> pts;
  for (std::size_t i = 0; i < n; ++i)
    pts.emplace_back(static_cast<std::int64_t>(rng.below(64)), static_cast<std::int64_t>(rng.below(64)));
  auto m = zero_matrix(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto dx = pts[i].first - pts[j].first, dy = pts[i].second - pts[j].second;
      const auto s = static_cast<std::uint64_t>(dx * dx + dy * dy);
      const auto ticks = isqrt_ceil(s * k * k) + 1;
      m[i][j] = m[j][i] = Rational(static_cast<long>(ticks), static_cast<unsigned long>(k));
      m[i][j].canonicalize();
      m[j][i].canonicalize();
    }
  return loometric::validate_metric(m);
}

FiniteMetricSpace random_space(Rng& rng, std::size_t min_n, std::size_t max_n) {
  const std::size_t n = min_n + rng.below(max_n - min_n + 1);
  if (rng.below(2) == 0) return random_band_space(rng, n, 1 + static_cast<long>(rng.below(4)));
  return random_generic_space(rng, n);
}

FiniteMetricSpace line_space(std::size_t n, const Rational& step) {
  auto m = zero_matrix(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = step * static_cast<long>(i > j ? i - j : j - i);
  return loometric::validate_metric(m);
}

bool triangles_hold(const std::vector<std::vector<Rational>>& m) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (m[i][j] > m[i][k] + m[k][j]) return false;
  return true;
}

Rational gh_twice_by_relations(const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
  const std::size_t nx = x.size(), ny = y.size(), k = nx * ny;
  if (k > 24) throw std::invalid_argument("relation enumeration too large");
  const DiffRanks r(x, y);
  // cell c = (c / ny, c % ny)
  std::vector<std::uint32_t> row(nx, 0), col(ny, 0);
  for (std::size_t c = 0; c < k; ++c) {
    row[c / ny] |= 1u << c;
    col[c % ny] |= 1u << c;
  }
  std::vector<std::uint16_t> dis(std::size_t{1} << k, 0);
  std::uint16_t best = UINT16_MAX;
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    const unsigned low = static_cast<unsigned>(__builtin_ctz(mask));
    const std::uint32_t rest = mask & (mask - 1);
    std::uint16_t d = dis[rest];
    for (std::uint32_t m = rest; m; m &= m - 1) {
      const unsigned c = static_cast<unsigned>(__builtin_ctz(m));
      d = std::max(d, r(low / ny, c / ny, low % ny, c % ny));
    }
    dis[mask] = d;
    if (d >= best) continue;
    bool covers = true;
    for (auto rm : row) covers = covers && (mask & rm);
    for (auto cm : col) covers = covers && (mask & cm);
    if (covers) best = d;
  }
  return r.values[best];
}

Rational gh_twice_by_maps(const FiniteMetricSpace& x, const FiniteMetricSpace& y, const std::optional<Rational>& hint) {
  const std::size_t nx = x.size(), ny = y.size();
  const DiffRanks r(x, y);
  std::vector<std::size_t> f(nx), g(ny);

  auto feasible = [&](std::uint16_t t) {
    std::function<bool(std::size_t)> assign_g;
    std::function<bool(std::size_t)> assign_f = [&](std::size_t a) -> bool {
      if (a == nx) return assign_g(0);
      for (std::size_t c = 0; c < ny; ++c) {
        f[a] = c;
        bool ok = true;
        for (std::size_t b = 0; b < a && ok; ++b) ok = r(a, b, c, f[b]) <= t;
        if (ok && assign_f(a + 1)) return true;
      }
      return false;
    };
    assign_g = [&](std::size_t c) -> bool {
      if (c == ny) return true;
      for (std::size_t a = 0; a < nx; ++a) {
        g[c] = a;
        bool ok = true;
        for (std::size_t d = 0; d < c && ok; ++d) ok = r(a, g[d], c, d) <= t;
        // codistortion |dX(x, g(y)) - dY(f(x), y)|
        for (std::size_t b = 0; b < nx && ok; ++b) ok = r(b, a, f[b], c) <= t;
        if (ok && assign_g(c + 1)) return true;
      }
      return false;
    };
    return assign_f(0);
  };

  std::size_t lo = 0, hi = r.values.size() - 1;
  if (hint) {
    const auto it = std::lower_bound(r.values.begin(), r.values.end(), *hint);
    if (it != r.values.end() && *it == *hint) {
      const auto k = static_cast<std::size_t>(it - r.values.begin());
      if (feasible(static_cast<std::uint16_t>(k)) && (k == 0 || !feasible(static_cast<std::uint16_t>(k - 1))))
        return *hint;
    }
  }
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (feasible(static_cast<std::uint16_t>(mid))) hi = mid;
    else lo = mid + 1;
  }
  return r.values[lo];
}

Rational gh_twice(const FiniteMetricSpace& x, const FiniteMetricSpace& y, const std::optional<Rational>& hint) {
  if (x.size() * y.size() <= 20) return gh_twice_by_relations(x, y);
  return gh_twice_by_maps(x, y, hint);
}

Simplex brute_simplex(const FiniteMetricSpace& space) {
  const std::size_t n = space.size();
  Simplex best;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) < 2) continue;
    std::vector<std::size_t> pts;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) pts.push_back(i);
    const Rational side = space(pts[0], pts[1]);
    bool equi = true;
    for (std::size_t a = 0; a < pts.size() && equi; ++a)
      for (std::size_t b = a + 1; b < pts.size() && equi; ++b) equi = space(pts[a], pts[b]) == side;
    if (!equi) continue;
    const bool better = best.points.empty() || pts.size() > best.points.size() ||
                        (pts.size() == best.points.size() &&
                         (side < best.side || (side == best.side && pts < best.points)));
    if (better) best = {pts, side};
  }
  return best;
}

bool loose_holds(const FiniteMetricSpace& space, const std::vector<std::vector<Rational>>& coords) {
  const std::size_t n = space.size();
  if (coords.size() != n) return false;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<Rational> image;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Rational sq = 0;
      for (std::size_t k = 0; k < coords[i].size(); ++k) sq += (coords[i][k] - coords[j][k]) * (coords[i][k] - coords[j][k]);
      if (sq == 0) return false;
      pairs.emplace_back(i, j);
      image.push_back(sq);
    }
  for (std::size_t a = 0; a < pairs.size(); ++a)
    for (std::size_t b = a + 1; b < pairs.size(); ++b) {
      const bool same_source = space(pairs[a].first, pairs[a].second) == space(pairs[b].first, pairs[b].second);
      if (same_source != (image[a] == image[b])) return false;
    }
  return true;
}

bool mnm_holds(const FiniteMetricSpace& space, const std::vector<std::vector<std::size_t>>& blocks,
               unsigned long n_inv, unsigned long m_inv) {
  const Rational mesh_limit(1, n_inv), gap(1, m_inv);
  for (const auto& b : blocks)
    for (auto p : b)
      for (auto q : b)
        if (space(p, q) >= mesh_limit) return false;
  const std::size_t k = blocks.size();
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b)
      for (std::size_t c = 0; c < k; ++c)
        for (std::size_t d = c + 1; d < k; ++d) {
          if (a == c && b == d) continue;
          for (auto p : blocks[a])
            for (auto q : blocks[b])
              for (auto s : blocks[c])
                for (auto t : blocks[d])
                  if (abs(space(p, q) - space(s, t)) <= gap) return false;
        }
  return true;
}

std::vector<std::vector<std::vector<std::size_t>>> set_partitions(std::size_t n) {
  std::vector<std::vector<std::vector<std::size_t>>> out;
  std::vector<std::size_t> label(n, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
    if (i == n) {
      std::vector<std::vector<std::size_t>> p(used);
      for (std::size_t j = 0; j < n; ++j) p[label[j]].push_back(j);
      out.push_back(std::move(p));
      return;
    }
    for (std::size_t b = 0; b <= used; ++b) {
      label[i] = b;
      rec(i + 1, std::max(used, b + 1));
    }
  };
  rec(0, 0);
  return out;
}

std::optional<std::vector<std::vector<std::size_t>>> brute_mnm(const FiniteMetricSpace& space, unsigned long n_inv,
                                                               unsigned long m_inv) {
  if (space.size() > 9) throw std::invalid_argument("too many points for partition enumeration");
  for (auto& p : set_partitions(space.size()))
    if (mnm_holds(space, p, n_inv, m_inv)) return p;
  return std::nullopt;
}

} // namespace oracle

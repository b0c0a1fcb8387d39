#include "oracles.hpp"

#include "loometric/obstruction.hpp"

#include <doctest.h>

#include <numeric>

using namespace loometric;

namespace {

FiniteMetricSpace all_equal(std::size_t n, long side = 1) {
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n, side));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 0;
  return validate_metric(m);
}

} // namespace

TEST_CASE("simplex examples") {
  CHECK(max_regular_simplex(all_equal(3)).points == std::vector<std::size_t>{0, 1, 2});
  const auto inj = validate_metric({{0, 1, 3}, {1, 0, 2}, {3, 2, 0}});
  const auto w = max_regular_simplex(inj);
  CHECK(w.points == std::vector<std::size_t>{0, 1});
  CHECK(w.side == 1);
  CHECK(dim_lower_bound(inj) == 1);
  CHECK(dim_lower_bound(all_equal(4)) == 3);
  CHECK(dim_lower_bound(validate_metric({{0}})) == 0);
  CHECK_THROWS_AS(max_regular_simplex(validate_metric({{0}})), Error);
}

TEST_CASE("stretched 4-simplex keeps a simplex of size 4") {
  // one edge of the regular 4-simplex lengthened to 101/100; still metric
  auto m = all_equal(5).matrix();
  m[0][1] = m[1][0] = Rational(101, 100);
  const auto w = max_regular_simplex(validate_metric(m));
  CHECK(w.points.size() == 4);
  CHECK(w.points == std::vector<std::size_t>{0, 2, 3, 4});
  CHECK(w.side == 1);
}

TEST_CASE("ties prefer the smaller side") {
  // {0,1,2} at side 2 and {3,4,5} at side 1, cross distances 3/2..2
  std::vector<std::vector<Rational>> m(6, std::vector<Rational>(6, Rational(7, 4)));
  for (std::size_t i = 0; i < 6; ++i) m[i][i] = 0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (i != j) {
        m[i][j] = 2;
        m[i + 3][j + 3] = 1;
      }
  const auto w = max_regular_simplex(validate_metric(m));
  CHECK(w.points == std::vector<std::size_t>{3, 4, 5});
}

TEST_CASE("simplex matches subset enumeration") {
  Rng rng(99);
  for (int t = 0; t < 200; ++t) {
    const auto s = oracle::random_space(rng, 2, 10);
    const auto w = max_regular_simplex(s);
    const auto b = oracle::brute_simplex(s);
    CHECK(w.points == b.points);
    CHECK(w.side == b.side);
  }
}

TEST_CASE("dim bound is invariant under relabeling and scaling") {
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    const auto s = oracle::random_band_space(rng, 2 + rng.below(8), 2);
    std::vector<std::size_t> order(s.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    auto scaled = s.matrix();
    for (auto& row : scaled)
      for (auto& v : row) v *= Rational(7, 3);
    CHECK(dim_lower_bound(s.permuted(order)) == dim_lower_bound(s));
    CHECK(dim_lower_bound(validate_metric(scaled)) == dim_lower_bound(s));
  }
}

TEST_CASE("max_clique") {
  // 5-cycle plus chord 0-2: triangles {0,1,2}
  const std::size_t n = 5;
  std::vector<char> adj(n * n, 0);
  auto edge = [&](std::size_t a, std::size_t b) { adj[a * n + b] = adj[b * n + a] = 1; };
  edge(0, 1), edge(1, 2), edge(2, 3), edge(3, 4), edge(4, 0), edge(0, 2);
  CHECK(max_clique(adj, n) == std::vector<std::size_t>{0, 1, 2});
  CHECK(max_clique(adj, n, 4).empty());
  const std::vector<char> none(9, 0);
  CHECK(max_clique(none, 3) == std::vector<std::size_t>{0});
}

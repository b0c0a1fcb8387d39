#include "oracles.hpp"

#include "loometric/gh.hpp"

#include <doctest.h>

#include <numeric>

using namespace loometric;

namespace {

FiniteMetricSpace pair_at(long d) { return validate_metric({{0, d}, {d, 0}}); }
FiniteMetricSpace point() { return validate_metric({{0}}); }

FiniteMetricSpace collinear(std::initializer_list<long> xs) {
  std::vector<long> v(xs);
  std::vector<std::vector<Rational>> m(v.size(), std::vector<Rational>(v.size(), 0));
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m[i][j] = std::abs(v[i] - v[j]);
  return validate_metric(m);
}

} // namespace

TEST_CASE("hausdorff examples") {
  const auto s = collinear({0, 1, 5});
  const std::vector<std::size_t> a{0}, b{1, 2}, c{0, 2}, d{1};
  CHECK(hausdorff(s, a, a) == 0);
  CHECK(hausdorff(s, a, b) == 5);
  CHECK(hausdorff(s, c, d) == 4);
  CHECK(hausdorff(s, b, a) == hausdorff(s, a, b));
  const std::vector<std::size_t> empty;
  CHECK_THROWS_AS(hausdorff(s, empty, a), Error);
}

TEST_CASE("correspondence basics") {
  const Correspondence r{{0, 0}, {0, 1}};
  CHECK(is_correspondence(r, 1, 2));
  CHECK_FALSE(is_correspondence(r, 2, 2));
  CHECK(distortion(point(), pair_at(1), r) == 1);
  CHECK(identity_distortion(pair_at(2), pair_at(3)) == 1);
}

TEST_CASE("gh examples") {
  const auto x = collinear({0, 1, 5});
  const auto same = gh_exact(x, x);
  CHECK(same.value == 0);
  CHECK(same.exact);
  CHECK(same.correspondence == Correspondence{{0, 0}, {1, 1}, {2, 2}});

  const auto r = gh_exact(point(), pair_at(1));
  CHECK(r.value == Rational(1, 2));
  CHECK(r.correspondence == Correspondence{{0, 0}, {0, 1}});

  const auto two = gh_exact(pair_at(2), pair_at(3));
  CHECK(two.value == Rational(1, 2));
  CHECK(two.correspondence == Correspondence{{0, 0}, {1, 1}});
  CHECK(oracle::gh_twice_by_relations(pair_at(2), pair_at(3)) == 1);

  const auto empty = validate_metric(std::vector<std::vector<Rational>>{});
  CHECK_THROWS_AS(gh_exact(empty, x), Error);
}

TEST_CASE("gh bounds") {
  const auto x = collinear({0, 3, 7});
  const auto b = gh_bounds(x, x);
  CHECK(b.lower == 0);
  CHECK(b.upper == 0);
  const auto big = collinear({0, 10});
  const auto small = collinear({0, 2});
  CHECK(gh_bounds(big, small).lower >= 4);
  const auto pb = gh_bounds(point(), pair_at(1));
  CHECK(pb.lower <= Rational(1, 2));
  CHECK(pb.upper >= Rational(1, 2));
}

TEST_CASE("gh agrees with the two oracles") {
  Rng rng(1234);
  for (int t = 0; t < 120; ++t) {
    const auto x = oracle::random_space(rng, 1, 4);
    const auto y = oracle::random_space(rng, 1, 4);
    const auto r = gh_exact(x, y);
    REQUIRE(r.exact);
    const Rational twice = oracle::gh_twice_by_relations(x, y);
    CHECK(2 * r.value == twice);
    CHECK(oracle::gh_twice_by_maps(x, y) == twice);
    CHECK(is_correspondence(r.correspondence, x.size(), y.size()));
    CHECK(distortion(x, y, r.correspondence) == twice);
    const auto b = gh_bounds(x, y);
    CHECK(b.lower <= r.value);
    CHECK(r.value <= b.upper);
    CHECK(2 * b.upper == distortion(x, y, b.upper_witness));
  }
}

TEST_CASE("gh symmetry and relabeling") {
  Rng rng(77);
  for (int t = 0; t < 40; ++t) {
    const auto x = oracle::random_space(rng, 1, 5);
    const auto y = oracle::random_space(rng, 1, 5);
    CHECK(gh_exact(x, y).value == gh_exact(y, x).value);
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    CHECK(gh_exact(x, x.permuted(order)).value == 0);
  }
}

TEST_CASE("budget exhaustion reports bounds") {
  Rng rng(5);
  const auto x = oracle::random_generic_space(rng, 7);
  const auto y = oracle::random_generic_space(rng, 7);
  const auto r = gh_exact(x, y, 1);
  CHECK(r.lower <= r.upper);
  CHECK(r.value == r.upper);
  CHECK(is_correspondence(r.correspondence, 7, 7));
  if (!r.exact) CHECK(r.lower < r.upper);
  const auto full = gh_exact(x, y);
  CHECK(full.exact);
  CHECK(r.lower <= full.value);
  CHECK(full.value <= r.upper);
}

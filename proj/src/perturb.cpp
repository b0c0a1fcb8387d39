#include "loometric/embed.hpp"
#include "loometric/random.hpp"

#include <algorithm>
#include <numeric>

namespace loometric {

FiniteMetricSpace perturb_to_injective(const FiniteMetricSpace& space, const Rational& eps, std::uint64_t seed,
                                       const PerturbOptions& options) {
  if (eps <= 0) throw Error(Errc::InvalidArgument, "eps must be positive");
  if (options.grid < 2) throw Error(Errc::InvalidArgument, "perturbation grid is too coarse");
  const std::size_t n = space.size();
  if (n < 2) return space;
  if (const auto min = space.min_distance(); eps * 4 >= *min) {
    throw Error(Errc::EpsTooLarge, "eps must be below a quarter of the smallest distance (" + to_string(*min) + ")");
  }
  if (is_injective(space).injective) return space;

  Rng rng(seed);
  const Rational half = eps / 2;
  const Rational grid(static_cast<unsigned long>(options.grid));
  auto draw = [&](const Rational& d) {
    // d + eps/2 + [0, eps/2): every offset is in [eps/2, eps), so
    // d'(i,k) < d(i,k) + eps <= d(i,j) + d(j,k) + e(i,j) + e(j,k).
    Rational offset = half * Rational(static_cast<unsigned long>(rng.below(options.grid))) / grid;
    offset.canonicalize();
    return Rational(d + half + offset);
  };

  const auto pairs = all_pairs(n);
  std::vector<Rational> values(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) values[p] = draw(space(pairs[p].i, pairs[p].j));

  std::vector<std::size_t> redraws(pairs.size(), 0);
  for (;;) {
    std::vector<std::size_t> order(pairs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const int c = cmp(values[a], values[b]);
      return c != 0 ? c < 0 : a < b;
    });
    bool collided = false;
    for (std::size_t k = 1; k < order.size(); ++k) {
      if (values[order[k]] != values[order[k - 1]]) continue;
      const std::size_t p = std::max(order[k], order[k - 1]);
      if (++redraws[p] > options.retries_per_entry) {
        throw Error(Errc::GenericityExhausted, {pairs[p].i, pairs[p].j}, "could not separate colliding distances");
      }
      values[p] = draw(space(pairs[p].i, pairs[p].j));
      collided = true;
    }
    if (!collided) break;
  }

  std::vector<std::vector<Rational>> matrix(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    matrix[pairs[p].i][pairs[p].j] = values[p];
    matrix[pairs[p].j][pairs[p].i] = values[p];
  }
  return validate_metric(space.labels(), matrix);
}

} // namespace loometric

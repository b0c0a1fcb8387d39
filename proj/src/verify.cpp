#include "loometric/embed.hpp"

#include <algorithm>
#include <numeric>

namespace loometric {

Rational squared_distance(std::span<const Rational> a, std::span<const Rational> b) {
  Rational sum = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    Rational d = a[k] - b[k];
    sum += d * d;
  }
  return sum;
}

Embedding verify_loose(const FiniteMetricSpace& source, Embedding emb) {
  const std::size_t n = source.size();
  if (emb.dim == 0) throw Error(Errc::DimMismatch, "embedding dimension must be positive");
  if (emb.coords.size() != n) {
    throw Error(Errc::DimMismatch, "embedding has " + std::to_string(emb.coords.size()) + " points, space has " +
                                       std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (emb.coords[i].size() != emb.dim) {
      throw Error(Errc::DimMismatch, {i}, "point " + std::to_string(i) + " has wrong coordinate count");
    }
  }

  const auto pairs = all_pairs(n);
  std::vector<Rational> image(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    image[p] = squared_distance(emb.coords[pairs[p].i], emb.coords[pairs[p].j]);
    if (image[p] == 0) {
      emb.status = Violation{Violation::Kind::CoincidentPoints, pairs[p], pairs[p]};
      return emb;
    }
  }

  const auto pattern = distance_pattern(source);
  auto image_of = [&](const PointPair& q) -> const Rational& { return image[pair_index(q.i, q.j, n)]; };

  for (const auto& cls : pattern.classes) {
    const Rational& first = image_of(cls.pairs.front());
    for (std::size_t k = 1; k < cls.pairs.size(); ++k) {
      if (image_of(cls.pairs[k]) != first) {
        emb.status = Violation{Violation::Kind::SourceEqualImageDiffers, cls.pairs.front(), cls.pairs[k]};
        return emb;
      }
    }
  }

  std::vector<std::size_t> order(pattern.classes.size());
  std::iota(order.begin(), order.end(), 0);
  auto class_image = [&](std::size_t c) -> const Rational& { return image_of(pattern.classes[c].pairs.front()); };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const int cmp = ::cmp(class_image(a), class_image(b));
    return cmp != 0 ? cmp < 0 : a < b;
  });
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (class_image(order[k]) == class_image(order[k - 1])) {
      auto a = pattern.classes[order[k - 1]].pairs.front();
      auto b = pattern.classes[order[k]].pairs.front();
      if (b < a) std::swap(a, b);
      emb.status = Violation{Violation::Kind::ImageEqualSourceDiffers, a, b};
      return emb;
    }
  }

  emb.status = VerifiedLoose{};
  return emb;
}

} // namespace loometric

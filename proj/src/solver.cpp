#include "loometric/embed.hpp"
#include "loometric/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace loometric {

LoosePenalty::LoosePenalty(const DistancePattern& pattern, std::size_t dim, double margin)
    : points_(pattern.points), dim_(dim), classes_(pattern.classes.size()), margin_(margin),
      pairs_(all_pairs(pattern.points)), class_of_(pattern.class_of) {
  if (dim == 0) throw Error(Errc::InvalidArgument, "target dimension must be positive");
}

double LoosePenalty::value(std::span<const double> vars) const {
  std::vector<double> scratch(vars.size());
  return value_and_gradient(vars, scratch);
}

double LoosePenalty::value_and_gradient(std::span<const double> vars, std::span<double> grad) const {
  if (vars.size() != num_variables() || grad.size() != num_variables()) {
    throw Error(Errc::DimMismatch, "penalty variable vector has wrong length");
  }
  std::fill(grad.begin(), grad.end(), 0.0);
  const double* x = vars.data();
  const double* t = vars.data() + points_ * dim_;
  double* gx = grad.data();
  double* gt = grad.data() + points_ * dim_;
  double f = 0.0;

  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    const std::size_t i = pairs_[p].i, j = pairs_[p].j, c = class_of_[p];
    double s = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
      const double d = x[i * dim_ + k] - x[j * dim_ + k];
      s += d * d;
    }
    const double r = s - t[c];
    f += r * r;
    for (std::size_t k = 0; k < dim_; ++k) {
      const double d = 4.0 * r * (x[i * dim_ + k] - x[j * dim_ + k]);
      gx[i * dim_ + k] += d;
      gx[j * dim_ + k] -= d;
    }
    gt[c] -= 2.0 * r;
  }

  for (std::size_t b = 0; b < classes_; ++b) {
    for (std::size_t c = b + 1; c < classes_; ++c) {
      const double delta = t[b] - t[c];
      const double z = margin_ - std::abs(delta);
      if (z <= 0.0) continue;
      f += z * z;
      const double sign = delta >= 0.0 ? 1.0 : -1.0;
      gt[b] -= 2.0 * z * sign;
      gt[c] += 2.0 * z * sign;
    }
    const double z = margin_ - t[b];
    if (z > 0.0) {
      f += z * z;
      gt[b] -= 2.0 * z;
    }
  }
  return f;
}

double default_margin(const DistancePattern& pattern) {
  std::optional<Rational> gap;
  for (std::size_t c = 1; c < pattern.classes.size(); ++c) {
    Rational g = pattern.classes[c].value - pattern.classes[c - 1].value;
    if (g > 0 && (!gap || g < *gap)) gap = g;
  }
  const double m = gap ? gap->get_d() * 0.1 : 0.0;
  return std::max(m, 1e-3);
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

// Limited-memory BFGS with Armijo backtracking. Returns the final value.
double minimize(const LoosePenalty& penalty, std::vector<double>& x, std::size_t max_iters, double ftol) {
  constexpr std::size_t memory = 8;
  const std::size_t n = x.size();
  std::vector<double> g(n), xn(n), gn(n), d(n);
  double f = penalty.value_and_gradient(x, g);
  std::deque<std::pair<std::vector<double>, std::vector<double>>> history;

  for (std::size_t it = 0; it < max_iters && f > ftol; ++it) {
    // two-loop recursion
    d = g;
    std::vector<double> alpha(history.size());
    for (std::size_t h = history.size(); h-- > 0;) {
      const auto& [s, y] = history[h];
      alpha[h] = dot(s, d) / dot(y, s);
      for (std::size_t k = 0; k < n; ++k) d[k] -= alpha[h] * y[k];
    }
    if (!history.empty()) {
      const auto& [s, y] = history.back();
      const double gamma = dot(s, y) / dot(y, y);
      for (auto& v : d) v *= gamma;
    }
    for (std::size_t h = 0; h < history.size(); ++h) {
      const auto& [s, y] = history[h];
      const double beta = dot(y, d) / dot(y, s);
      for (std::size_t k = 0; k < n; ++k) d[k] += s[k] * (alpha[h] - beta);
    }
    for (auto& v : d) v = -v;

    double slope = dot(g, d);
    if (!(slope < 0.0)) {
      history.clear();
      for (std::size_t k = 0; k < n; ++k) d[k] = -g[k];
      slope = -dot(g, g);
    }
    double step = history.empty() ? std::min(1.0, 1.0 / std::sqrt(dot(g, g))) : 1.0;

    bool accepted = false;
    double fn = f;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t k = 0; k < n; ++k) xn[k] = x[k] + step * d[k];
      fn = penalty.value_and_gradient(xn, gn);
      if (fn <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (history.empty()) break;
      history.clear();
      continue;
    }

    std::vector<double> s(n), y(n);
    for (std::size_t k = 0; k < n; ++k) {
      s[k] = xn[k] - x[k];
      y[k] = gn[k] - g[k];
    }
    if (dot(s, y) > 1e-300) {
      history.emplace_back(std::move(s), std::move(y));
      if (history.size() > memory) history.pop_front();
    }
    x.swap(xn);
    g.swap(gn);
    f = fn;
  }
  return f;
}

// Translates `origin` to 0 and, for the canonical frame, rotates by
// Gram-Schmidt over the remaining points in index order.
std::vector<double> frame(const std::vector<double>& coords, std::size_t n, std::size_t dim, std::size_t origin,
                          bool canonical) {
  std::vector<double> y(n * dim);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < dim; ++k) y[i * dim + k] = coords[i * dim + k] - coords[origin * dim + k];
  if (!canonical) return y;

  std::vector<std::vector<double>> basis;
  auto try_add = [&](std::vector<double> v) {
    const double norm0 = std::sqrt(dot(v, v));
    if (norm0 == 0.0) return;
    for (const auto& e : basis) {
      const double c = dot(v, e);
      for (std::size_t k = 0; k < dim; ++k) v[k] -= c * e[k];
    }
    const double norm = std::sqrt(dot(v, v));
    if (norm <= 1e-9 * norm0) return;
    for (auto& c : v) c /= norm;
    basis.push_back(std::move(v));
  };
  for (std::size_t i = 0; i < n && basis.size() < dim; ++i) {
    if (i == origin) continue;
    try_add(std::vector<double>(y.begin() + static_cast<std::ptrdiff_t>(i * dim),
                                y.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim)));
  }
  for (std::size_t k = 0; k < dim && basis.size() < dim; ++k) {
    std::vector<double> e(dim, 0.0);
    e[k] = 1.0;
    try_add(std::move(e));
  }
  std::vector<double> z(n * dim);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < dim; ++k)
      z[i * dim + k] = dot(std::span<const double>(y.data() + i * dim, dim), basis[k]);
  return z;
}

// Exact integer pre-check of a snapped configuration against the pattern.
bool pattern_matches(const std::vector<std::int64_t>& ints, const DistancePattern& pattern, std::size_t dim) {
  const std::size_t n = pattern.points;
  auto sq = [&](const PointPair& p) {
    std::int64_t s = 0;
    for (std::size_t k = 0; k < dim; ++k) {
      const std::int64_t d = ints[p.i * dim + k] - ints[p.j * dim + k];
      s += d * d;
    }
    return s;
  };
  std::vector<std::int64_t> class_value;
  class_value.reserve(pattern.classes.size());
  for (const auto& cls : pattern.classes) {
    const std::int64_t v = sq(cls.pairs.front());
    if (v == 0) return false;
    for (std::size_t k = 1; k < cls.pairs.size(); ++k)
      if (sq(cls.pairs[k]) != v) return false;
    class_value.push_back(v);
  }
  std::sort(class_value.begin(), class_value.end());
  (void)n;
  return std::adjacent_find(class_value.begin(), class_value.end()) == class_value.end();
}

constexpr std::array<std::int64_t, 22> kDenominators{1,  2,  3,  4,   5,   6,   8,    10,   12,   16,   20,
                                                     24, 32, 48, 64, 128, 256, 512, 1024, 4096, 16384, 65536};
constexpr std::int64_t kMaxScale = 12;
constexpr double kIntLimit = 1 << 24;

// Snaps a converged float configuration to a rational one whose squared
// distances reproduce the pattern exactly. Tries every origin, raw and
// canonical frames, unit lengths 1..12 for the first frame vector, and a
// ladder of grid denominators.
std::optional<Embedding> rationalize(const FiniteMetricSpace& space, const DistancePattern& pattern,
                                     const std::vector<double>& coords, std::size_t dim) {
  const std::size_t n = space.size();
  std::vector<std::int64_t> ints(n * dim);
  for (std::size_t origin = 0; origin < n; ++origin) {
    for (bool canonical : {true, false}) {
      const auto z = frame(coords, n, dim, origin, canonical);
      const std::size_t anchor = origin == 0 ? 1 : 0;
      const double unit = std::sqrt(dot(std::span<const double>(z.data() + anchor * dim, dim),
                                        std::span<const double>(z.data() + anchor * dim, dim)));
      if (!(unit > 0.0)) continue;
      for (std::int64_t scale = 1; scale <= kMaxScale; ++scale) {
        for (std::int64_t q : kDenominators) {
          const double factor = static_cast<double>(scale * q) / unit;
          bool fits = true;
          for (std::size_t k = 0; k < z.size() && fits; ++k) {
            const double v = std::round(z[k] * factor);
            fits = std::abs(v) < kIntLimit;
            ints[k] = static_cast<std::int64_t>(v);
          }
          if (!fits || !pattern_matches(ints, pattern, dim)) continue;
          Embedding emb;
          emb.dim = dim;
          emb.coords.assign(n, std::vector<Rational>(dim));
          for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < dim; ++k) {
              emb.coords[i][k] = Rational(static_cast<long>(ints[i * dim + k]), static_cast<unsigned long>(q));
              emb.coords[i][k].canonicalize();
            }
          }
          emb = verify_loose(space, std::move(emb));
          if (emb.verified()) return emb;
        }
      }
    }
  }
  return std::nullopt;
}

struct RestartOutcome {
  std::optional<Embedding> embedding;
  double residual = std::numeric_limits<double>::infinity();
};

RestartOutcome run_restart(const FiniteMetricSpace& space, const DistancePattern& pattern,
                           const LoosePenalty& penalty, std::size_t dim, std::size_t restart,
                           const SolverOptions& options) {
  const std::size_t n = space.size();
  Rng rng(derive_seed(options.seed, restart));
  // Restarts cycle through effective dimensions dim, dim-1, ..., 1; the
  // unused coordinates start at zero and the gradient keeps them there.
  const std::size_t effective = dim - restart % dim;
  const double diam = space.diameter().get_d();

  std::vector<double> vars(penalty.num_variables(), 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < effective; ++k) vars[i * dim + k] = rng.normal() * diam / 2.0;
  for (std::size_t c = 0; c < pattern.classes.size(); ++c) {
    const double v = pattern.classes[c].value.get_d();
    vars[n * dim + c] = v * v;
  }

  const double scale = diam * diam;
  const double ftol = 1e-26 * scale * scale;
  RestartOutcome outcome;
  outcome.residual = minimize(penalty, vars, options.max_iters, ftol);
  if (outcome.residual <= 1e-14 * scale * scale) {
    const std::vector<double> coords(vars.begin(), vars.begin() + static_cast<std::ptrdiff_t>(n * dim));
    outcome.embedding = rationalize(space, pattern, coords, dim);
  }
  return outcome;
}

Embedding trivial_embedding(const FiniteMetricSpace& space, std::size_t dim) {
  Embedding emb;
  emb.dim = dim;
  emb.coords.assign(space.size(), std::vector<Rational>(dim, Rational(0)));
  return verify_loose(space, std::move(emb));
}

} // namespace

namespace {

bool is_square(std::uint64_t m, std::uint64_t* root = nullptr) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(m)));
  while (r * r > m) --r;
  while ((r + 1) * (r + 1) <= m) ++r;
  if (root) *root = r;
  return r * r == m;
}

// Fermat: m is a sum of two squares iff every prime 3 mod 4 divides it to
// an even power.
bool two_squares(std::uint64_t m) {
  for (std::uint64_t p = 2; p * p <= m; ++p) {
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    if (p % 4 == 3 && e % 2) return false;
  }
  return m % 4 != 3;
}

// Legendre: m is a sum of three squares unless m = 4^a (8b + 7).
bool three_squares(std::uint64_t m) {
  if (m == 0) return true;
  while (m % 4 == 0) m /= 4;
  return m % 8 != 7;
}

std::size_t squares_needed(std::uint64_t m) {
  if (m == 0) return 0;
  if (is_square(m)) return 1;
  if (two_squares(m)) return 2;
  return three_squares(m) ? 3 : 4;
}

// Fewest squares summing to m, by descending search on the first term.
std::vector<std::uint64_t> as_squares(std::uint64_t m) {
  const std::size_t k = squares_needed(m);
  if (k == 0) return {};
  std::uint64_t r = 0;
  if (k == 1) {
    is_square(m, &r);
    return {r};
  }
  is_square(m, &r);
  for (std::uint64_t a = r; a > 0; --a) {
    const std::uint64_t rest = m - a * a;
    if (squares_needed(rest) == k - 1) {
      auto tail = as_squares(rest);
      tail.insert(tail.begin(), a);
      return tail;
    }
  }
  throw std::logic_error("sum of squares search failed");
}

} // namespace

Embedding incidence_embedding(const FiniteMetricSpace& space) {
  const std::size_t n = space.size();
  if (n < 2) {
    Embedding e;
    e.coords.assign(n, std::vector<Rational>(1, Rational(0)));
    return verify_loose(space, std::move(e));
  }
  const auto pattern = distance_pattern(space);
  const std::size_t pairs = n * (n - 1) / 2;

  // pair {i,j} gets weight w = class rank + 1 on its own axis: +w at i, -w at j
  std::vector<std::uint64_t> weight(pairs), load(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::uint64_t w = pattern.class_of[pair_index(i, j, n)] + 1;
      weight[pair_index(i, j, n)] = w;
      load[i] += w * w;
      load[j] += w * w;
    }

  // Private axes top every squared norm up to K, so that
  // |x_i - x_j|^2 = 2K + 2 w_ij^2. Pick K to need the fewest axes.
  const std::uint64_t base = *std::max_element(load.begin(), load.end());
  std::uint64_t best_k = base;
  std::size_t best_axes = SIZE_MAX;
  for (std::uint64_t k = base; k < base + 64; ++k) {
    std::size_t axes = 0;
    for (auto l : load) axes += squares_needed(k - l);
    if (axes < best_axes) {
      best_axes = axes;
      best_k = k;
    }
  }

  Embedding e;
  e.dim = std::max<std::size_t>(pairs + best_axes, 1);
  e.coords.assign(n, std::vector<Rational>(e.dim, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::size_t p = pair_index(i, j, n);
      e.coords[i][p] = static_cast<long>(weight[p]);
      e.coords[j][p] = -static_cast<long>(weight[p]);
    }
  std::size_t axis = pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (auto a : as_squares(best_k - load[i])) e.coords[i][axis++] = static_cast<long>(a);
  return verify_loose(space, std::move(e));
}

SolveResult solve_loose_embedding(const FiniteMetricSpace& space, std::size_t dim, const SolverOptions& options) {
  if (dim == 0) throw Error(Errc::InvalidArgument, "target dimension must be positive");
  const std::size_t n = space.size();
  if (n < 2) return trivial_embedding(space, dim);

  const auto simplex = max_regular_simplex(space);
  if (simplex.points.size() > dim + 1) {
    return InfeasibleReport{std::nullopt, simplex, 0};
  }

  if (is_injective(space).injective) {
    Embedding line = embed_line_branching(space, options.seed);
    for (auto& row : line.coords) row.resize(dim, Rational(0));
    line.dim = dim;
    return verify_loose(space, std::move(line));
  }

  const auto pattern = distance_pattern(space);

  // A regular simplex on n points sits exactly on the standard basis.
  if (pattern.classes.size() == 1 && dim >= n) {
    Embedding basis = trivial_embedding(space, dim);
    for (std::size_t i = 0; i < n; ++i) basis.coords[i][i] = 1;
    basis = verify_loose(space, std::move(basis));
    if (basis.verified()) return basis;
  }

  // Enough room for the exact construction: skip the numerics.
  if (dim >= n * (n - 1) / 2) {
    Embedding exact = incidence_embedding(space);
    if (exact.dim <= dim && exact.verified()) {
      for (auto& row : exact.coords) row.resize(dim, Rational(0));
      exact.dim = dim;
      return verify_loose(space, std::move(exact));
    }
  }

  const LoosePenalty penalty(pattern, dim, options.margin.value_or(default_margin(pattern)));
  const std::size_t threads = std::max<std::size_t>(options.threads, 1);
  InfeasibleReport report;
  for (std::size_t first = 0; first < options.restarts; first += threads) {
    const std::size_t count = std::min(threads, options.restarts - first);
    std::vector<RestartOutcome> outcomes(count);
    if (count == 1) {
      outcomes[0] = run_restart(space, pattern, penalty, dim, first, options);
    } else {
      std::vector<std::thread> workers;
      for (std::size_t w = 0; w < count; ++w) {
        workers.emplace_back([&, w] { outcomes[w] = run_restart(space, pattern, penalty, dim, first + w, options); });
      }
      for (auto& t : workers) t.join();
    }
    for (auto& outcome : outcomes) {
      ++report.restarts_run;
      if (outcome.embedding) return std::move(*outcome.embedding);
      if (!report.best_residual || outcome.residual < *report.best_residual) report.best_residual = outcome.residual;
    }
  }
  return report;
}

} // namespace loometric

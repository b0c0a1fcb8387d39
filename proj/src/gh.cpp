#include "loometric/gh.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace loometric {

bool is_correspondence(const Correspondence& r, std::size_t x_size, std::size_t y_size) {
  std::vector<char> seen_x(x_size, 0), seen_y(y_size, 0);
  for (const auto& [i, j] : r) {
    if (i >= x_size || j >= y_size) return false;
    seen_x[i] = seen_y[j] = 1;
  }
  return std::all_of(seen_x.begin(), seen_x.end(), [](char c) { return c != 0; }) &&
         std::all_of(seen_y.begin(), seen_y.end(), [](char c) { return c != 0; });
}

Rational distortion(const FiniteMetricSpace& x, const FiniteMetricSpace& y, const Correspondence& r) {
  Rational worst = 0;
  for (const auto& [i, j] : r) {
    if (i >= x.size() || j >= y.size()) throw Error(Errc::InvalidArgument, "correspondence index out of range");
    for (const auto& [k, l] : r) {
      Rational d = abs_diff(x(i, k), y(j, l));
      if (d > worst) worst = d;
    }
  }
  return worst;
}

Rational identity_distortion(const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
  if (x.size() != y.size()) throw Error(Errc::InvalidArgument, "identity correspondence needs equal sizes");
  Rational worst = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      Rational d = abs_diff(x(i, j), y(i, j));
      if (d > worst) worst = d;
    }
  return worst;
}

Rational hausdorff(const FiniteMetricSpace& ambient, std::span<const std::size_t> a, std::span<const std::size_t> b) {
  if (a.empty() || b.empty()) throw Error(Errc::EmptySubset, "Hausdorff distance needs nonempty subsets");
  for (auto v : a)
    if (v >= ambient.size()) throw Error(Errc::InvalidArgument, {v}, "point index out of range");
  for (auto v : b)
    if (v >= ambient.size()) throw Error(Errc::InvalidArgument, {v}, "point index out of range");
  auto directed = [&](std::span<const std::size_t> from, std::span<const std::size_t> to) {
    Rational worst = 0;
    for (auto p : from) {
      Rational nearest = ambient(p, to.front());
      for (auto q : to)
        if (ambient(p, q) < nearest) nearest = ambient(p, q);
      if (nearest > worst) worst = nearest;
    }
    return worst;
  };
  Rational ab = directed(a, b), ba = directed(b, a);
  return ab > ba ? ab : ba;
}

namespace {

std::vector<Rational> eccentricities(const FiniteMetricSpace& s) {
  std::vector<Rational> ecc(s.size(), Rational(0));
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      if (s(i, j) > ecc[i]) ecc[i] = s(i, j);
  return ecc;
}

// Hausdorff distance between two finite nonempty sets of reals.
Rational line_hausdorff(std::vector<Rational> a, std::vector<Rational> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  auto directed = [](const std::vector<Rational>& from, const std::vector<Rational>& to) {
    Rational worst = 0;
    for (const auto& v : from) {
      auto it = std::lower_bound(to.begin(), to.end(), v);
      Rational nearest = it == to.end() ? Rational(v - to.back()) : Rational(*it - v);
      if (it != to.begin()) {
        Rational left = v - *std::prev(it);
        if (left < nearest) nearest = left;
      }
      if (nearest > worst) worst = nearest;
    }
    return worst;
  };
  Rational ab = directed(a, b), ba = directed(b, a);
  return ab > ba ? ab : ba;
}

std::vector<Rational> distance_values(const FiniteMetricSpace& s) {
  std::vector<Rational> v{Rational(0)};
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) v.push_back(s(i, j));
  return v;
}

std::vector<std::size_t> by_decreasing_eccentricity(const FiniteMetricSpace& s) {
  const auto ecc = eccentricities(s);
  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ecc[a] > ecc[b]; });
  return order;
}

Correspondence sorted(Correspondence r) {
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

void require_nonempty(const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
  if (x.empty() || y.empty()) throw Error(Errc::EmptySubset, "Gromov-Hausdorff distance needs nonempty spaces");
}

} // namespace

GhBounds gh_bounds(const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
  require_nonempty(x, y);
  GhBounds bounds;
  Rational lower = abs_diff(x.diameter(), y.diameter());
  for (Rational candidate : {line_hausdorff(distance_values(x), distance_values(y)),
                             line_hausdorff(eccentricities(x), eccentricities(y))}) {
    if (candidate > lower) lower = candidate;
  }
  bounds.lower = lower / 2;

  // Greedy: each X point (by decreasing eccentricity) takes the Y point that
  // raises the distortion least, then uncovered Y points do the same.
  Correspondence r;
  auto added_cost = [&](std::size_t i, std::size_t j) {
    Rational worst = 0;
    for (const auto& [k, l] : r) {
      Rational d = abs_diff(x(i, k), y(j, l));
      if (d > worst) worst = d;
    }
    return worst;
  };
  std::vector<char> covered(y.size(), 0);
  for (std::size_t i : by_decreasing_eccentricity(x)) {
    std::size_t best_j = 0;
    Rational best_cost;
    for (std::size_t j = 0; j < y.size(); ++j) {
      Rational c = added_cost(i, j);
      if (j == 0 || c < best_cost) {
        best_cost = c;
        best_j = j;
      }
    }
    r.emplace_back(i, best_j);
    covered[best_j] = 1;
  }
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (covered[j]) continue;
    std::size_t best_i = 0;
    Rational best_cost;
    for (std::size_t i = 0; i < x.size(); ++i) {
      Rational c = added_cost(i, j);
      if (i == 0 || c < best_cost) {
        best_cost = c;
        best_i = i;
      }
    }
    r.emplace_back(best_i, j);
  }
  bounds.upper_witness = sorted(std::move(r));
  bounds.upper = distortion(x, y, bounds.upper_witness) / 2;
  return bounds;
}

namespace {

using Rank = std::uint32_t;

// Branch and bound over image sets. Every correspondence contains one in
// which each pair has an endpoint of degree one; those are enumerated by
// giving each X point either a single Y point or a set of at least two Y
// points that nobody else uses.
class GhSearch {
public:
  GhSearch(const FiniteMetricSpace& x, const FiniteMetricSpace& y, std::uint64_t budget)
      : a_(x.size()), b_(y.size()), budget_(budget) {
    std::vector<Rational> all;
    all.reserve(a_ * a_ * b_ * b_);
    for (std::size_t i = 0; i < a_; ++i)
      for (std::size_t k = 0; k < a_; ++k)
        for (std::size_t j = 0; j < b_; ++j)
          for (std::size_t l = 0; l < b_; ++l) all.push_back(abs_diff(x(i, k), y(j, l)));
    values_ = all;
    std::sort(values_.begin(), values_.end());
    values_.erase(std::unique(values_.begin(), values_.end()), values_.end());
    cost_.resize(all.size());
    for (std::size_t t = 0; t < all.size(); ++t) {
      cost_[t] = static_cast<Rank>(std::lower_bound(values_.begin(), values_.end(), all[t]) - values_.begin());
    }
  }

  Rank rank_of(const Rational& v) const {
    return static_cast<Rank>(std::lower_bound(values_.begin(), values_.end(), v) - values_.begin());
  }
  const Rational& value_of(Rank r) const { return values_[r]; }
  std::uint64_t nodes() const { return nodes_; }
  bool exhausted() const { return exhausted_; }

  /// Finds a correspondence with distortion rank < `bound` (optimize) or
  /// <= `bound` (first in canonical order). Returns false if none.
  bool optimize(const std::vector<std::size_t>& order, Rank& bound, Correspondence& best) {
    canonical_ = false;
    return start(order, bound, best);
  }
  bool first_within(Rank bound, Correspondence& found) {
    canonical_ = true;
    std::vector<std::size_t> order(a_);
    std::iota(order.begin(), order.end(), 0);
    Rank b = bound;
    return start(order, b, found);
  }

private:
  using Mask = std::uint64_t;

  Rank cost(std::size_t i, std::size_t k, std::size_t j, std::size_t l) const {
    return cost_[((i * a_ + k) * b_ + j) * b_ + l];
  }

  struct Candidate {
    std::vector<std::size_t> ys;
    Rank added;
  };

  bool start(const std::vector<std::size_t>& order, Rank& bound, Correspondence& best) {
    order_ = order;
    bound_ = bound;
    found_ = false;
    pairs_.clear();
    std::vector<Rank> inc(a_ * b_, 0);
    search(0, 0, 0, 0, inc);
    if (found_) {
      best = sorted(best_);
      bound = bound_;
    }
    return found_;
  }

  bool admissible(Rank r) const { return canonical_ ? r <= bound_ : r < bound_; }

  std::vector<Candidate> candidates(std::size_t depth, std::size_t x, Mask covered, Mask exclusive,
                                    const std::vector<Rank>& inc) const {
    const Mask full = b_ == 64 ? ~Mask{0} : ((Mask{1} << b_) - 1);
    const Mask uncovered = full & ~covered;
    const bool last = depth + 1 == a_;
    std::vector<Candidate> out;
    auto evaluate = [&](std::vector<std::size_t> ys) {
      Rank worst = 0;
      for (std::size_t s = 0; s < ys.size(); ++s) {
        worst = std::max(worst, inc[x * b_ + ys[s]]);
        for (std::size_t t = s + 1; t < ys.size(); ++t) worst = std::max(worst, cost(x, x, ys[s], ys[t]));
      }
      out.push_back({std::move(ys), worst});
    };
    if (last && uncovered != 0) {
      std::vector<std::size_t> ys;
      for (std::size_t j = 0; j < b_; ++j)
        if (uncovered >> j & 1) ys.push_back(j);
      evaluate(std::move(ys));
      return out;
    }
    for (std::size_t j = 0; j < b_; ++j)
      if (!(exclusive >> j & 1)) evaluate({j});
    if (!last && std::popcount(uncovered) >= 2) {
      // nonempty subsets of the uncovered points with at least two members
      for (Mask sub = uncovered; sub != 0; sub = (sub - 1) & uncovered) {
        if (std::popcount(sub) < 2) continue;
        std::vector<std::size_t> ys;
        for (std::size_t j = 0; j < b_; ++j)
          if (sub >> j & 1) ys.push_back(j);
        evaluate(std::move(ys));
      }
    }
    if (canonical_) {
      std::sort(out.begin(), out.end(), [](const Candidate& p, const Candidate& q) { return p.ys < q.ys; });
    } else {
      std::sort(out.begin(), out.end(), [](const Candidate& p, const Candidate& q) {
        return p.added != q.added ? p.added < q.added : p.ys < q.ys;
      });
    }
    return out;
  }

  Rank lower_bound(std::size_t depth, Mask covered, Mask exclusive, const std::vector<Rank>& inc) const {
    Rank lb = 0;
    for (std::size_t d = depth; d < a_; ++d) {
      const std::size_t x = order_[d];
      Rank best = ~Rank{0};
      for (std::size_t j = 0; j < b_; ++j)
        if (!(exclusive >> j & 1)) best = std::min(best, inc[x * b_ + j]);
      lb = std::max(lb, best);
    }
    for (std::size_t j = 0; j < b_; ++j) {
      if (covered >> j & 1) continue;
      Rank best = ~Rank{0};
      for (std::size_t d = depth; d < a_; ++d) best = std::min(best, inc[order_[d] * b_ + j]);
      lb = std::max(lb, best);
    }
    return lb;
  }

  void search(std::size_t depth, Rank current, Mask covered, Mask exclusive, const std::vector<Rank>& inc) {
    if (exhausted_ || (found_ && canonical_)) return;
    if (depth == a_) {
      // the last point always closes the cover
      found_ = true;
      bound_ = current;
      best_ = pairs_;
      return;
    }
    if (!admissible(std::max(current, lower_bound(depth, covered, exclusive, inc)))) return;

    const std::size_t x = order_[depth];
    for (auto& cand : candidates(depth, x, covered, exclusive, inc)) {
      if (exhausted_ || (found_ && canonical_)) return;
      const Rank next = std::max(current, cand.added);
      if (!admissible(next)) {
        if (canonical_) continue;
        break;  // candidates are sorted by added cost
      }
      if (++nodes_ > budget_) {
        exhausted_ = true;
        return;
      }
      Mask cov = covered, exc = exclusive;
      for (auto j : cand.ys) {
        cov |= Mask{1} << j;
        if (cand.ys.size() > 1) exc |= Mask{1} << j;
        pairs_.emplace_back(x, j);
      }
      std::vector<Rank> next_inc = inc;
      for (std::size_t d = depth + 1; d < a_; ++d) {
        const std::size_t other = order_[d];
        for (std::size_t l = 0; l < b_; ++l) {
          Rank& slot = next_inc[other * b_ + l];
          for (auto j : cand.ys) slot = std::max(slot, cost(other, x, l, j));
        }
      }
      search(depth + 1, next, cov, exc, next_inc);
      pairs_.resize(pairs_.size() - cand.ys.size());
    }
  }

  std::size_t a_, b_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
  bool canonical_ = false;
  bool found_ = false;
  Rank bound_ = 0;
  std::vector<Rational> values_;
  std::vector<Rank> cost_;
  std::vector<std::size_t> order_;
  Correspondence pairs_;
  Correspondence best_;
};

} // namespace

GhResult gh_exact(const FiniteMetricSpace& x, const FiniteMetricSpace& y, std::uint64_t budget) {
  require_nonempty(x, y);
  const GhBounds bounds = gh_bounds(x, y);
  GhResult result;
  result.lower = bounds.lower;
  result.upper = bounds.upper;
  result.value = bounds.upper;
  result.correspondence = bounds.upper_witness;

  if (x.size() > 64 || y.size() > 64) return result;

  GhSearch search(x, y, budget);
  Rank incumbent = search.rank_of(bounds.upper * 2);
  Correspondence best = bounds.upper_witness;
  if (bounds.lower < bounds.upper) search.optimize(by_decreasing_eccentricity(x), incumbent, best);
  result.nodes = search.nodes();
  result.value = search.value_of(incumbent) / 2;
  result.correspondence = best;
  if (search.exhausted()) {
    result.upper = result.value;
    return result;
  }

  result.exact = true;
  result.lower = result.upper = result.value;
  Correspondence canonical;
  GhSearch canonical_search(x, y, budget);
  if (canonical_search.first_within(incumbent, canonical)) result.correspondence = canonical;
  result.nodes += canonical_search.nodes();
  return result;
}

} // namespace loometric

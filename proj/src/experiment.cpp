#include "loometric/experiment.hpp"

#include "loometric/embed.hpp"
#include "loometric/gh.hpp"

#include <chrono>
#include <cmath>

namespace loometric {

FiniteMetricSpace random_euclidean_space(Rng& rng, std::size_t points, std::size_t dim, std::uint64_t grid) {
  std::vector<std::vector<double>> xs(points, std::vector<double>(dim));
  for (auto& x : xs)
    for (auto& c : x) c = rng.unit();

  const Rational shift(2, grid);
  std::vector<std::vector<Rational>> m(points, std::vector<Rational>(points, 0));
  for (std::size_t i = 0; i < points; ++i) {
    for (std::size_t j = i + 1; j < points; ++j) {
      double sq = 0;
      for (std::size_t k = 0; k < dim; ++k) sq += (xs[i][k] - xs[j][k]) * (xs[i][k] - xs[j][k]);
      const auto ticks = static_cast<long>(std::llround(std::sqrt(sq) * static_cast<double>(grid)));
      Rational d(ticks, grid);
      d += shift;
      d.canonicalize();
      m[i][j] = d;
      m[j][i] = d;
    }
  }
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < points; ++i) labels.push_back("p" + std::to_string(i));
  return validate_metric(std::move(labels), m);
}

ExperimentReport experiment_genericity(const ExperimentParams& params) {
  if (params.trials < 1) throw Error(Errc::InvalidArgument, "experiment needs at least one trial");
  if (params.points < 2) throw Error(Errc::InvalidArgument, "experiment needs at least two points");
  if (params.eps <= 0) throw Error(Errc::InvalidArgument, "eps must be positive");

  const auto start = std::chrono::steady_clock::now();
  ExperimentReport report;
  report.trials = params.trials;
  report.points = params.points;
  report.eps = params.eps;
  report.seed = params.seed;
  for (auto n : params.n_grid)
    for (auto m : params.m_grid) report.mnm_hits.push_back({n, m, 0});

  const Rational floor_gap = 4 * params.eps;
  for (std::size_t t = 0; t < params.trials; ++t) {
    Rng rng(derive_seed(params.seed, 2 * t));
    FiniteMetricSpace space = random_euclidean_space(rng, params.points, params.ambient_dim);
    // The perturbation needs eps < min distance / 4; redraw the rare
    // samples with two nearly coincident points.
    for (std::size_t attempt = 0; *space.min_distance() <= floor_gap; ++attempt) {
      if (attempt == 1000) throw Error(Errc::EpsTooLarge, "eps too large for the sampled spaces");
      ++report.resampled;
      space = random_euclidean_space(rng, params.points, params.ambient_dim);
    }

    const auto perturbed = perturb_to_injective(space, params.eps, derive_seed(params.seed, 2 * t + 1));
    if (is_injective(perturbed).injective) ++report.injective_after_perturbation;
    for (auto& h : report.mnm_hits)
      if (find_mnm_partition(perturbed, h.n_inv, h.m_inv)) ++h.hits;
  }

  report.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start)
                          .count();
  return report;
}

Json report_json(const ExperimentReport& report, bool include_runtime) {
  Json hits = Json::array();
  for (const auto& h : report.mnm_hits) hits.push_back(Json{{"N", h.n_inv}, {"M", h.m_inv}, {"hits", h.hits}});
  Json out{{"trials", report.trials},
           {"points", report.points},
           {"eps", to_string(report.eps)},
           {"injective_after_perturbation", report.injective_after_perturbation},
           {"resampled", report.resampled},
           {"mnm_hits", std::move(hits)},
           {"seed", report.seed}};
  if (include_runtime) out["runtime_ms"] = report.runtime_ms;
  return out;
}

} // namespace loometric

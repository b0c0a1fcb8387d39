#pragma once

#include "loometric/io.hpp"
#include "loometric/metric_space.hpp"
#include "loometric/random.hpp"

#include <cstdint>
#include <vector>

namespace loometric {

/// Points uniform in [0,1)^dim with Euclidean distances rounded to the grid
/// 1/grid and shifted up by 2/grid, which absorbs the rounding error in
/// every triangle inequality.
FiniteMetricSpace random_euclidean_space(Rng& rng, std::size_t points, std::size_t dim,
                                         std::uint64_t grid = 1'000'000);

struct ExperimentParams {
  std::size_t trials = 100;
  std::size_t points = 6;
  std::size_t ambient_dim = 2;
  Rational eps{1, 1000};
  std::vector<std::uint64_t> n_grid{1, 2, 4};
  std::vector<std::uint64_t> m_grid{10, 100, 1000, 10000};
  std::uint64_t seed = 0;
};

struct MnmHits {
  std::uint64_t n_inv;
  std::uint64_t m_inv;
  std::size_t hits;
  bool operator==(const MnmHits&) const = default;
};

struct ExperimentReport {
  std::size_t trials = 0;
  std::size_t points = 0;
  Rational eps;
  std::size_t injective_after_perturbation = 0;
  std::size_t resampled = 0;  // draws rejected because eps >= min distance / 4
  std::vector<MnmHits> mnm_hits;
  std::uint64_t seed = 0;
  std::int64_t runtime_ms = 0;
};

/// Samples random spaces, perturbs each to an injective distance, and
/// records how often dendrogram-cut witnesses are found on the (N, M) grid.
/// Everything except runtime_ms is a function of the parameters.
ExperimentReport experiment_genericity(const ExperimentParams& params);

Json report_json(const ExperimentReport& report, bool include_runtime = true);

} // namespace loometric

#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "mcland/optimizer.hpp"

namespace mcland {

/// `count` equally spaced values strictly inside (lo, hi), plus `extra`.
/// Output is sorted and duplicate-free.
struct GammaGrid {
  int count = 100;
  double lo = 0.0;
  double hi = 0.5;
  std::vector<double> extra;

  std::vector<double> values() const;
};

struct SuccessRateRow {
  double gamma = 0.0;
  int n = 0;
  int r = 0;
  int s_size = 0;
  double p = 0.0;
  std::uint64_t seed = 0;
  std::int64_t trials = 0;
  std::int64_t successes = 0;
  double rate = 0.0;
  double wilson_ci_low = 0.0;
  double wilson_ci_high = 0.0;
};

using SuccessRateTable = std::vector<SuccessRateRow>;

/// Wilson score interval at the given two-sided confidence.
std::pair<double, double> wilson_interval(std::int64_t successes, std::int64_t trials, double confidence = 0.95);

struct ExperimentSpec {
  /// Graph source, in order of precedence: explicit graph, named pattern,
  /// otherwise G(n / r, p) repaired around s.
  std::optional<BlockSparsityGraph> graph;
  std::optional<Pattern> pattern;
  PatternParams pattern_params;
  double p = 0.3;
  int n = 20;
  int r = 1;
  /// 0-based vertices of the canonical support.
  VertexSet s;
  std::vector<double> gammas;
  std::int64_t trials = 300;
  InitDistribution init = InitDistribution::gaussian(1.0);
  GdConfig gd;
  double success_rel_tol = 1e-4;
  std::uint64_t seed = 0;
  int threads = 0;
};

/// Builds the canonical instance, then for every gamma draws one perturbation
/// and runs `trials` independent gradient descents. Rows follow the order of
/// spec.gammas.
SuccessRateTable success_rate_experiment(const ExperimentSpec& spec);

/// Graph used by success_rate_experiment for this spec.
BlockSparsityGraph experiment_graph(const ExperimentSpec& spec);

struct EqualProbabilityResult {
  /// Global minima diag(signs) x*, ordered by the sign bit pattern over the support.
  std::vector<Eigen::VectorXd> minima;
  std::vector<std::int64_t> histogram;
  std::int64_t matched = 0;
  /// Runs that did not converge; never matched.
  std::int64_t unconverged = 0;
  double chi_square = 0.0;
  double chi_square_p = 0.0;
};

/// Endpoints farther than this from every known minimum raise UnmatchedEndpoint.
inline constexpr double kMatchRadius = 0.1;

/// Rank-1 unperturbed canonical instance: every sign pattern of x* on its
/// support is a global minimum. Tallies GD endpoints over those minima and
/// tests uniformity with Pearson's chi-square.
EqualProbabilityResult equal_probability_test(const McInstance& inst, std::int64_t trials, std::uint64_t seed,
                                              const InitDistribution& init = InitDistribution::gaussian(1.0),
                                              const GdConfig& gd = {}, int threads = 0);

}  // namespace mcland

#include "mcland/experiment.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "mcland/error.hpp"
#include "mcland/rng.hpp"
#include "parallel.hpp"

namespace mcland {
namespace {

// Stream tags so perturbations and trial starts never share seeds.
constexpr std::uint64_t kGraphStream = 0x67726170ULL;
constexpr std::uint64_t kPerturbStream = 0x70657274ULL;
constexpr std::uint64_t kTrialStream = 0x7472696cULL;

}  // namespace

std::vector<double> GammaGrid::values() const {
  if (count < 0) throw Error(ErrorCode::InvalidParams, "gamma grid count must be nonnegative");
  if (!(hi > lo)) throw Error(ErrorCode::InvalidParams, "gamma grid needs hi > lo");
  std::vector<double> out;
  for (int i = 1; i <= count; ++i) out.push_back(lo + (hi - lo) * i / (count + 1));
  out.insert(out.end(), extra.begin(), extra.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) throw Error(ErrorCode::InvalidParams, "gamma grid is empty");
  return out;
}

std::pair<double, double> wilson_interval(std::int64_t successes, std::int64_t trials, double confidence) {
  if (trials <= 0) return {0.0, 1.0};
  const boost::math::normal normal;
  const double z = boost::math::quantile(normal, 0.5 + confidence / 2.0);
  const double nt = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / nt;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nt;
  const double center = (p + z2 / (2.0 * nt)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / nt + z2 / (4.0 * nt * nt));
  const double low = successes == 0 ? 0.0 : std::max(0.0, center - half);
  const double high = successes == trials ? 1.0 : std::min(1.0, center + half);
  return {low, high};
}

BlockSparsityGraph experiment_graph(const ExperimentSpec& spec) {
  if (spec.graph) return *spec.graph;
  if (spec.pattern) return build_named_pattern(*spec.pattern, spec.pattern_params);
  if (spec.r < 1 || spec.n < spec.r) throw Error(ErrorCode::InvalidParams, "need 1 <= r <= n");
  return build_erdos_renyi(spec.n / spec.r, spec.p, spec.s, derive_seed(spec.seed, kGraphStream));
}

SuccessRateTable success_rate_experiment(const ExperimentSpec& spec) {
  if (spec.trials < 1) throw Error(ErrorCode::InvalidParams, "trials must be at least 1");
  if (spec.gammas.empty()) throw Error(ErrorCode::InvalidParams, "gamma grid is empty");
  const BlockSparsityGraph g = experiment_graph(spec);
  const MeasurementSet omega = induce_measurement_set(g, spec.n, spec.r);
  const FactorMatrix x_star = build_canonical_ground_truth(g, spec.s, spec.n, spec.r);

  SuccessRateTable table;
  for (std::size_t gi = 0; gi < spec.gammas.size(); ++gi) {
    const double gamma = spec.gammas[gi];
    const FactorMatrix x_eps = perturb(x_star, gamma, derive_seed(spec.seed ^ kPerturbStream, gi));
    const McInstance inst = assemble_instance(x_eps, omega, g);
    const Landscape landscape(inst);
    const std::uint64_t trial_base = derive_seed(spec.seed ^ kTrialStream, gi);

    std::vector<char> success(static_cast<std::size_t>(spec.trials), 0);
    detail::parallel_for(spec.trials, spec.threads, [&](std::int64_t t) {
      const FactorMatrix x0 = sample_radial_init(spec.init, spec.n, spec.r, derive_seed(trial_base, t));
      const RunResult run = gradient_descent(landscape, x0.matrix(), spec.gd);
      success[static_cast<std::size_t>(t)] =
          run.status != RunStatus::Diverged && is_success(inst, run.final_point, spec.success_rel_tol);
    });

    SuccessRateRow row;
    row.gamma = gamma;
    row.n = spec.n;
    row.r = spec.r;
    row.s_size = static_cast<int>(spec.s.size());
    row.p = spec.p;
    row.seed = spec.seed;
    row.trials = spec.trials;
    row.successes = std::count(success.begin(), success.end(), 1);
    row.rate = static_cast<double>(row.successes) / static_cast<double>(row.trials);
    std::tie(row.wilson_ci_low, row.wilson_ci_high) = wilson_interval(row.successes, row.trials);
    table.push_back(row);
  }
  return table;
}

EqualProbabilityResult equal_probability_test(const McInstance& inst, std::int64_t trials, std::uint64_t seed,
                                              const InitDistribution& init, const GdConfig& gd, int threads) {
  if (inst.r() != 1) throw Error(ErrorCode::InvalidParams, "equal probability test is rank-1 only");
  if (trials < 1) throw Error(ErrorCode::InvalidParams, "trials must be at least 1");
  const Eigen::VectorXd x_star = inst.ground_truth().matrix().col(0);
  std::vector<int> support;
  for (int i = 0; i < inst.n(); ++i) {
    if (x_star(i) != 0.0) support.push_back(i);
  }
  if (support.empty()) throw Error(ErrorCode::ZeroMatrix, "ground truth is zero");
  if (support.size() > 20) throw Error(ErrorCode::InvalidParams, "support too large to enumerate minima");

  EqualProbabilityResult result;
  const std::size_t cells = std::size_t{1} << support.size();
  for (std::size_t mask = 0; mask < cells; ++mask) {
    Eigen::VectorXd x = x_star;
    for (std::size_t b = 0; b < support.size(); ++b) {
      if (mask & (std::size_t{1} << b)) x(support[b]) = -x(support[b]);
    }
    result.minima.push_back(std::move(x));
  }

  const Landscape landscape(inst);
  // -2: unconverged, -1: unmatched, otherwise the cell index.
  std::vector<std::int64_t> cell(static_cast<std::size_t>(trials), -2);
  detail::parallel_for(trials, threads, [&](std::int64_t t) {
    const FactorMatrix x0 = sample_radial_init(init, inst.n(), 1, derive_seed(seed, t));
    const RunResult run = gradient_descent(landscape, x0.matrix(), gd);
    if (run.status != RunStatus::Converged) return;
    const Eigen::VectorXd end = run.final_point.matrix().col(0);
    std::int64_t best = -1;
    double best_d = kMatchRadius;
    for (std::size_t c = 0; c < cells; ++c) {
      const double d = (end - result.minima[c]).norm();
      if (d <= best_d) {
        best_d = d;
        best = static_cast<std::int64_t>(c);
      }
    }
    cell[static_cast<std::size_t>(t)] = best;
  });

  result.histogram.assign(cells, 0);
  for (std::size_t t = 0; t < cell.size(); ++t) {
    if (cell[t] == -2) {
      ++result.unconverged;
    } else if (cell[t] == -1) {
      throw Error(ErrorCode::UnmatchedEndpoint,
                  "trial " + std::to_string(t) + " converged away from every known global minimum");
    } else {
      ++result.histogram[static_cast<std::size_t>(cell[t])];
      ++result.matched;
    }
  }
  if (result.matched > 0 && cells > 1) {
    const double expected = static_cast<double>(result.matched) / static_cast<double>(cells);
    for (std::int64_t h : result.histogram) {
      const double d = static_cast<double>(h) - expected;
      result.chi_square += d * d / expected;
    }
    const boost::math::chi_squared dist(static_cast<double>(cells - 1));
    result.chi_square_p = boost::math::cdf(boost::math::complement(dist, result.chi_square));
  } else {
    result.chi_square_p = 1.0;
  }
  return result;
}

}  // namespace mcland

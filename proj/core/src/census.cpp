#include "mcland/census.hpp"

#include <algorithm>
#include <cmath>

#include "mcland/error.hpp"
#include "mcland/rng.hpp"
#include "parallel.hpp"

namespace mcland {
namespace {

struct Outcome {
  bool resolved = false;
  Eigen::MatrixXd canonical;
  PointAssessment assessment;
};

Outcome run_start(const Landscape& landscape, const ClassifyTolerances& tols, const CensusConfig& cfg,
                  const GdConfig& gd, std::uint64_t seed) {
  Outcome out;
  const FactorMatrix x0 = sample_radial_init(cfg.init, landscape.n(), landscape.r(), seed);
  const RunResult run = gradient_descent(landscape, x0.matrix(), gd);
  if (run.status == RunStatus::Diverged) return out;
  NewtonOptions newton = cfg.newton;
  newton.subspace = landscape.r() > 1 ? Subspace::LowerTriangularTangent : Subspace::Full;
  FactorMatrix refined = run.final_point;
  try {
    refined = newton_refine(landscape, run.final_point.matrix(), newton);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularHessian && e.code() != ErrorCode::NotNearCritical) throw;
  }
  out.canonical = canonicalize(refined).matrix();
  out.assessment = assess_point(landscape, out.canonical, tols);
  out.resolved = out.assessment.classification != Classification::NotCritical;
  return out;
}

bool is_origin(const Eigen::MatrixXd& x) { return x.cwiseAbs().maxCoeff() <= kCanonicalZero; }

}  // namespace

std::int64_t CensusReport::count_classes(Classification c) const {
  return std::count_if(classes.begin(), classes.end(),
                       [c](const CriticalPointRecord& rec) { return rec.classification == c; });
}

std::int64_t CensusReport::count_points(Classification c) const {
  std::int64_t total = 0;
  for (const auto& rec : classes) {
    if (rec.classification == c) total += rec.orbit_points;
  }
  return total;
}

CensusReport multistart_census(const McInstance& inst, const LossSpec& loss, std::int64_t n_starts,
                               std::uint64_t seed, const CensusConfig& cfg) {
  if (n_starts < 1) throw Error(ErrorCode::InvalidParams, "n_starts must be at least 1");
  if (!(cfg.dedup_radius > 0.0)) throw Error(ErrorCode::InvalidParams, "dedup_radius must be positive");
  const Landscape landscape(inst, loss);
  const ClassifyTolerances tols = ClassifyTolerances::defaults(landscape);
  GdConfig gd = cfg.gd;
  if (gd.grad_tol <= 0.0) gd.grad_tol = 1e-6 * (1.0 + landscape.observed_norm());

  std::vector<Outcome> outcomes(static_cast<std::size_t>(n_starts));
  detail::parallel_for(n_starts, cfg.threads, [&](std::int64_t i) {
    outcomes[static_cast<std::size_t>(i)] =
        run_start(landscape, tols, cfg, gd, derive_seed(seed, static_cast<std::uint64_t>(i)));
  });

  CensusReport report;
  report.n_starts = n_starts;
  report.dedup_radius = cfg.dedup_radius;
  for (const Outcome& o : outcomes) {
    if (!o.resolved) {
      ++report.unresolved;
      continue;
    }
    auto match = std::find_if(report.classes.begin(), report.classes.end(), [&](const CriticalPointRecord& rec) {
      return (rec.canonical_rep.matrix() - o.canonical).norm() <= cfg.dedup_radius;
    });
    if (match != report.classes.end()) {
      ++match->hit_count;
      continue;
    }
    CriticalPointRecord rec;
    rec.canonical_rep = FactorMatrix(o.canonical);
    rec.objective = o.assessment.objective;
    rec.grad_norm = o.assessment.grad_norm;
    rec.lambda_min = o.assessment.lambda_min;
    rec.classification = o.assessment.classification;
    rec.hit_count = 1;
    rec.orbit_points = inst.r() == 1 ? (is_origin(o.canonical) ? 1 : 2) : 0;
    report.classes.push_back(std::move(rec));
  }
  std::stable_sort(report.classes.begin(), report.classes.end(),
                   [](const CriticalPointRecord& a, const CriticalPointRecord& b) { return a.objective < b.objective; });
  return report;
}

LowerBoundCheck check_lower_bound(const CensusReport& report, const BlockSparsityGraph& g, int r,
                                  const std::optional<VertexSet>& s) {
  if (!s) throw Error(ErrorCode::MissingS, "lower bound needs the maximal independent set S");
  const auto size = static_cast<std::int64_t>(s->size());
  if (size == 0) throw Error(ErrorCode::EmptyS, "S is empty");
  LowerBoundCheck check;
  if (r == 1 && g.e2().empty()) {
    check.unit = "points";
    check.bound = (std::int64_t{1} << size) - 2;
    check.found = report.count_points(Classification::SpuriousLocalMin);
  } else {
    check.unit = "orbits";
    check.bound = (std::int64_t{1} << (r * (size - 1))) - 1;
    check.found = report.count_classes(Classification::SpuriousLocalMin);
  }
  check.satisfied = check.found >= check.bound;
  return check;
}

bool same_class_sets(const CensusReport& a, const CensusReport& b, double radius) {
  auto covered = [radius](const CensusReport& from, const CensusReport& in) {
    return std::all_of(from.classes.begin(), from.classes.end(), [&](const CriticalPointRecord& x) {
      return std::any_of(in.classes.begin(), in.classes.end(), [&](const CriticalPointRecord& y) {
        return x.classification == y.classification &&
               (x.canonical_rep.matrix() - y.canonical_rep.matrix()).norm() <= radius;
      });
    });
  };
  return a.classes.size() == b.classes.size() && covered(a, b) && covered(b, a);
}

}  // namespace mcland

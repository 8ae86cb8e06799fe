#include "mcland/optimizer.hpp"

#include <cmath>
#include <limits>

#include "mcland/error.hpp"
#include "mcland/rng.hpp"

namespace mcland {

InitDistribution InitDistribution::gaussian(double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidParams, "gaussian init needs sigma > 0");
  return {Kind::Gaussian, sigma};
}

InitDistribution InitDistribution::ball(double radius) {
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidParams, "ball init needs radius > 0");
  return {Kind::Ball, radius};
}

FactorMatrix sample_radial_init(const InitDistribution& dist, int n, int r, std::uint64_t seed) {
  if (!(dist.scale > 0.0)) throw Error(ErrorCode::InvalidParams, "init scale must be positive");
  Rng rng(seed);
  Eigen::MatrixXd x = rng.gaussian_matrix(n, r);
  if (dist.kind == InitDistribution::Kind::Gaussian) return FactorMatrix(dist.scale * x);
  const double u = rng.uniform01();
  const double radius = dist.scale * std::pow(u, 1.0 / (static_cast<double>(n) * r));
  const double norm = x.norm();
  return FactorMatrix(norm > 0.0 ? Eigen::MatrixXd(x * (radius / norm)) : x);
}

GdConfig resolve_gd_config(const Landscape& landscape, const Eigen::MatrixXd& x0, GdConfig cfg) {
  const double obs = landscape.observed_norm();
  const double star = landscape.factor_norm();
  if (cfg.grad_tol <= 0.0) cfg.grad_tol = 1e-9 * (1.0 + obs);
  if (cfg.divergence_bound <= 0.0) cfg.divergence_bound = 10.0 * (1.0 + star);
  if (cfg.step <= 0.0) {
    const double rho = std::max(x0.norm(), star);
    cfg.step = 0.25 / (4.0 * (obs + 3.0 * rho * rho) + std::numeric_limits<double>::min());
  }
  if (cfg.max_iters < 1) throw Error(ErrorCode::InvalidParams, "max_iters must be positive");
  return cfg;
}

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Converged: return "Converged";
    case RunStatus::MaxIters: return "MaxIters";
    case RunStatus::Diverged: return "Diverged";
  }
  return "?";
}

RunResult gradient_descent(const Landscape& landscape, const Eigen::MatrixXd& x0, const GdConfig& cfg_in,
                           const GdObserver& observer) {
  const GdConfig cfg = resolve_gd_config(landscape, x0, cfg_in);
  const int n = landscape.n();
  const int r = landscape.r();
  if (x0.rows() != n || x0.cols() != r) {
    throw Error(ErrorCode::DimensionMismatch, "initial point shape differs from the instance");
  }
  RowMajorMatrix x = x0;
  RowMajorMatrix g(n, r);
  RowMajorMatrix trial(n, r);
  RowMajorMatrix gt(n, r);
  double f = landscape.evaluate(x.data(), g.data());
  double gn = g.norm();
  double step = cfg.step;
  int halvings = 0;
  const double eps = std::numeric_limits<double>::epsilon();
  if (observer) observer(0, x);

  RunResult out;
  out.status = RunStatus::MaxIters;
  std::int64_t it = 0;
  for (; it < cfg.max_iters; ++it) {
    if (gn <= cfg.grad_tol) {
      out.status = RunStatus::Converged;
      break;
    }
    trial = x - step * g;
    const double ft = landscape.evaluate(trial.data(), gt.data());
    if (!(ft <= f + 8.0 * eps * std::abs(f))) {
      step *= 0.5;
      if (++halvings > cfg.max_halvings) {
        out.status = RunStatus::Diverged;
        break;
      }
      continue;
    }
    x.swap(trial);
    g.swap(gt);
    f = ft;
    gn = g.norm();
    if (observer) observer(it + 1, x);
    if (x.norm() > cfg.divergence_bound) {
      out.status = RunStatus::Diverged;
      ++it;
      break;
    }
  }
  if (out.status == RunStatus::MaxIters && gn <= cfg.grad_tol) out.status = RunStatus::Converged;
  out.final_point = FactorMatrix(Eigen::MatrixXd(x));
  out.final_objective = f;
  out.final_grad_norm = gn;
  out.iterations = it;
  out.step = step;
  return out;
}

RunResult gradient_descent(const McInstance& inst, const LossSpec& loss, const FactorMatrix& x0,
                           const GdConfig& cfg) {
  return gradient_descent(Landscape(inst, loss), x0.matrix(), cfg);
}

FactorMatrix newton_refine(const Landscape& landscape, const Eigen::MatrixXd& x_in, const NewtonOptions& opts) {
  const double scale = 1.0 + landscape.observed_norm();
  const double tol = opts.tol > 0.0 ? opts.tol : 1e-12 * scale;
  const double coarse = opts.coarse_tol > 0.0 ? opts.coarse_tol : 1e-3 * scale;

  const double g0 = landscape.gradient(x_in).norm();
  if (!std::isfinite(g0) || g0 > coarse) {
    throw Error(ErrorCode::NotNearCritical, "gradient norm " + std::to_string(g0) + " exceeds the coarse threshold");
  }
  if (g0 <= tol) return FactorMatrix(x_in);

  Eigen::MatrixXd x = opts.subspace == Subspace::LowerTriangularTangent
                          ? restriction_map(FactorMatrix(x_in)).matrix()
                          : x_in;
  const auto keep = subspace_indices(landscape.n(), landscape.r(), opts.subspace);
  const auto k = static_cast<Eigen::Index>(keep.size());

  Eigen::MatrixXd best = x_in;
  double best_gn = g0;
  Eigen::MatrixXd grad = landscape.gradient(x);
  double gn = grad.norm();
  if (gn < best_gn) {
    best = x;
    best_gn = gn;
  }
  for (int step = 0; step < opts.max_steps && best_gn > tol; ++step) {
    const Eigen::MatrixXd h = landscape.dense_hessian(x)(keep, keep);
    Eigen::VectorXd gsub(k);
    for (Eigen::Index i = 0; i < k; ++i) gsub(i) = grad.data()[keep[static_cast<std::size_t>(i)]];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
    const Eigen::VectorXd lam = eig.eigenvalues();
    const double amax = lam.cwiseAbs().maxCoeff();
    const double amin = lam.cwiseAbs().minCoeff();
    if (!(amin > 0.0) || amax / amin > opts.max_condition) {
      throw Error(ErrorCode::SingularHessian, "Hessian condition number exceeds the limit");
    }
    const Eigen::VectorXd coeff = (eig.eigenvectors().transpose() * gsub).cwiseQuotient(lam);
    const Eigen::VectorXd dsub = -(eig.eigenvectors() * coeff);
    Eigen::MatrixXd dir = Eigen::MatrixXd::Zero(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < k; ++i) dir.data()[keep[static_cast<std::size_t>(i)]] = dsub(i);

    bool moved = false;
    double t = 1.0;
    for (int back = 0; back < 30; ++back, t *= 0.5) {
      const Eigen::MatrixXd cand = x + t * dir;
      const Eigen::MatrixXd gc = landscape.gradient(cand);
      const double gcn = gc.norm();
      if (std::isfinite(gcn) && gcn < gn) {
        x = cand;
        grad = gc;
        gn = gcn;
        moved = true;
        break;
      }
    }
    if (!moved) break;
    if (gn < best_gn) {
      best = x;
      best_gn = gn;
    }
  }
  return FactorMatrix(std::move(best));
}

FactorMatrix newton_refine(const McInstance& inst, const LossSpec& loss, const FactorMatrix& x,
                           Subspace subspace, double tol) {
  NewtonOptions opts;
  opts.subspace = subspace;
  opts.tol = tol;
  return newton_refine(Landscape(inst, loss), x.matrix(), opts);
}

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::GlobalMin: return "GlobalMin";
    case Classification::SpuriousLocalMin: return "SpuriousLocalMin";
    case Classification::StrictSaddle: return "StrictSaddle";
    case Classification::Degenerate: return "Degenerate";
    case Classification::NotCritical: return "NotCritical";
  }
  return "?";
}

ClassifyTolerances ClassifyTolerances::defaults(const Landscape& landscape) {
  const double s = landscape.observed_norm();
  return {1e-8 * (1.0 + s), 1e-14 * s * s, 1e-7 * (1.0 + s)};
}

PointAssessment assess_point(const Landscape& landscape, const Eigen::MatrixXd& x,
                             const ClassifyTolerances& tols) {
  PointAssessment a;
  a.objective = landscape.objective(x);
  a.grad_norm = landscape.gradient(x).norm();
  const bool rank_r = landscape.r() > 1;
  const Eigen::MatrixXd base = rank_r ? restriction_map(FactorMatrix(x)).matrix() : x;
  a.lambda_min = min_hessian_eigen(landscape, base,
                                   rank_r ? Subspace::LowerTriangularTangent : Subspace::Full)
                     .value;
  if (!(a.grad_norm <= tols.crit_tol)) {
    a.classification = Classification::NotCritical;
  } else if (a.objective <= tols.global_tol) {
    a.classification = Classification::GlobalMin;
  } else if (a.lambda_min < -tols.eig_tol) {
    a.classification = Classification::StrictSaddle;
  } else if (a.lambda_min > tols.eig_tol) {
    a.classification = Classification::SpuriousLocalMin;
  } else {
    a.classification = Classification::Degenerate;
  }
  return a;
}

Classification classify_critical_point(const McInstance& inst, const LossSpec& loss,
                                       const FactorMatrix& x, const ClassifyTolerances& tols) {
  return assess_point(Landscape(inst, loss), x.matrix(), tols).classification;
}

Classification classify_critical_point(const McInstance& inst, const LossSpec& loss,
                                       const FactorMatrix& x) {
  const Landscape landscape(inst, loss);
  return assess_point(landscape, x.matrix(), ClassifyTolerances::defaults(landscape)).classification;
}

bool is_success(const McInstance& inst, const FactorMatrix& x_hat, double rel_tol) {
  const Eigen::MatrixXd truth = inst.dense_ground_truth();
  const double diff = (x_hat.matrix() * x_hat.matrix().transpose() - truth).norm();
  return diff <= rel_tol * truth.norm();
}

}  // namespace mcland

#include "mcland/metric.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mcland/completion.hpp"
#include "mcland/error.hpp"
#include "mcland/landscape.hpp"
#include "mcland/optimizer.hpp"
#include "mcland/rng.hpp"

namespace mcland {
namespace {

constexpr double kSeparationMargin = 1.1;

struct PenaltyProblem {
  int n;
  int r;
  std::vector<ObservedEntry> pairs;
  double sep_target;

  Eigen::Index vars() const { return 2 * static_cast<Eigen::Index>(n) * r; }
  Eigen::Index rows() const { return 2 * static_cast<Eigen::Index>(pairs.size()) + 1; }

  // Variables: [vec(X1); vec(X2)], both column-major.
  void split(const Eigen::VectorXd& v, Eigen::MatrixXd& x1, Eigen::MatrixXd& x2) const {
    x1 = Eigen::Map<const Eigen::MatrixXd>(v.data(), n, r);
    x2 = Eigen::Map<const Eigen::MatrixXd>(v.data() + static_cast<Eigen::Index>(n) * r, n, r);
  }

  void residual(const Eigen::VectorXd& v, double rho, Eigen::VectorXd& res, Eigen::MatrixXd* jac) const {
    Eigen::MatrixXd x1, x2;
    split(v, x1, x2);
    const Eigen::Index nr = static_cast<Eigen::Index>(n) * r;
    const double srho = std::sqrt(rho);
    res.resize(rows());
    if (jac) jac->setZero(rows(), vars());
    const auto np = static_cast<Eigen::Index>(pairs.size());
    for (Eigen::Index k = 0; k < np; ++k) {
      const ObservedEntry& e = pairs[static_cast<std::size_t>(k)];
      const double w = e.row == e.col ? 1.0 : std::sqrt(2.0);
      const double m1 = x1.row(e.row).dot(x1.row(e.col));
      const double m2 = x2.row(e.row).dot(x2.row(e.col));
      res(k) = w * (m1 - e.value);
      res(np + k) = srho * w * (m1 - m2);
      if (!jac) continue;
      for (int a = 0; a < r; ++a) {
        const Eigen::Index pi = e.row + static_cast<Eigen::Index>(n) * a;
        const Eigen::Index pj = e.col + static_cast<Eigen::Index>(n) * a;
        (*jac)(k, pi) += w * x1(e.col, a);
        (*jac)(k, pj) += w * x1(e.row, a);
        (*jac)(np + k, pi) += srho * w * x1(e.col, a);
        (*jac)(np + k, pj) += srho * w * x1(e.row, a);
        (*jac)(np + k, nr + pi) -= srho * w * x2(e.col, a);
        (*jac)(np + k, nr + pj) -= srho * w * x2(e.row, a);
      }
    }
    const Eigen::MatrixXd d = x1 * x1.transpose() - x2 * x2.transpose();
    const double dist = d.norm();
    const double gap = sep_target - dist;
    res(2 * np) = gap > 0.0 ? srho * gap : 0.0;
    if (jac && gap > 0.0 && dist > 0.0) {
      const Eigen::MatrixXd g1 = -srho * 2.0 * d * x1 / dist;
      const Eigen::MatrixXd g2 = srho * 2.0 * d * x2 / dist;
      jac->row(2 * np).head(nr) = Eigen::Map<const Eigen::VectorXd>(g1.data(), nr);
      jac->row(2 * np).tail(nr) = Eigen::Map<const Eigen::VectorXd>(g2.data(), nr);
    }
  }
};

void levenberg_marquardt(const PenaltyProblem& prob, double rho, int iters, Eigen::VectorXd& v) {
  Eigen::VectorXd res;
  Eigen::MatrixXd jac;
  prob.residual(v, rho, res, &jac);
  double cost = res.squaredNorm();
  double mu = -1.0;
  Eigen::VectorXd trial_res;
  for (int it = 0; it < iters; ++it) {
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * res;
    if (jtr.norm() <= 1e-15 * (1.0 + cost)) break;
    if (mu < 0.0) mu = 1e-3 * std::max(jtj.diagonal().maxCoeff(), 1e-12);
    bool accepted = false;
    for (int tries = 0; tries < 40 && !accepted; ++tries) {
      Eigen::MatrixXd lhs = jtj;
      lhs.diagonal().array() += mu;
      const Eigen::VectorXd step = lhs.ldlt().solve(-jtr);
      const Eigen::VectorXd cand = v + step;
      prob.residual(cand, rho, trial_res, nullptr);
      const double c = trial_res.squaredNorm();
      if (std::isfinite(c) && c < cost) {
        v = cand;
        accepted = true;
        mu = std::max(mu / 3.0, 1e-15);
      } else {
        mu *= 4.0;
      }
    }
    if (!accepted) break;
    prob.residual(v, rho, res, &jac);
    cost = res.squaredNorm();
  }
}

Eigen::MatrixXd warm_factor(const McInstance& inst, std::uint64_t seed) {
  try {
    return solve_by_propagation(inst).recovered_factor.matrix();
  } catch (const Error&) {
    const Landscape landscape(inst);
    const FactorMatrix x0 = sample_radial_init(InitDistribution::gaussian(1.0), inst.n(), inst.r(), seed);
    return gradient_descent(landscape, x0.matrix(), GdConfig{}).final_point.matrix();
  }
}

}  // namespace

MetricEstimate estimate_complexity_metric(const McInstance& inst, const MetricBudget& budget, double separation,
                                          std::uint64_t seed, double feasibility_tol) {
  if (budget.restarts < 1 || budget.iters < 1 || budget.rounds < 1) {
    throw Error(ErrorCode::InvalidParams, "metric budget must be positive");
  }
  if (separation < 0.0) throw Error(ErrorCode::InvalidParams, "separation must be positive");
  const int n = inst.n();
  const int r = inst.r();
  if (separation == 0.0) separation = 1e-3 * inst.dense_ground_truth().norm();
  if (!(separation > 0.0)) throw Error(ErrorCode::ZeroMatrix, "ground truth is zero; pass a separation");
  if (feasibility_tol <= 0.0) {
    feasibility_tol = std::min(1e-6 * (1.0 + inst.observed_norm()), separation / 10.0);
  }

  PenaltyProblem prob{n, r, inst.observed(), kSeparationMargin * separation};
  const Eigen::Index nr = static_cast<Eigen::Index>(n) * r;

  MetricEstimate best;
  best.separation = separation;
  best.feasibility_tol = feasibility_tol;

  std::optional<Eigen::MatrixXd> warm;
  const int warm_starts = budget.restarts / 2;
  for (int start = 0; start < budget.restarts; ++start) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(start)));
    Eigen::MatrixXd x1, x2;
    if (start < warm_starts) {
      if (!warm) warm = warm_factor(inst, derive_seed(seed, 0xfacadeULL));
      x1 = *warm;
      x2 = x1;
      // Flip a random nonempty proper subset of rows.
      std::vector<int> rows(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)] = i;
      rng.shuffle(rows);
      const std::size_t flips = 1 + rng.below(static_cast<std::size_t>(std::max(1, n - 1)));
      for (std::size_t k = 0; k < flips; ++k) x2.row(rows[k]) *= -1.0;
    } else {
      x1 = rng.gaussian_matrix(n, r);
      x2 = rng.gaussian_matrix(n, r);
    }
    Eigen::VectorXd v(2 * nr);
    v.head(nr) = Eigen::Map<const Eigen::VectorXd>(x1.data(), nr);
    v.tail(nr) = Eigen::Map<const Eigen::VectorXd>(x2.data(), nr);

    double rho = budget.rho0;
    for (int round = 0; round < budget.rounds; ++round, rho *= budget.rho_growth) {
      levenberg_marquardt(prob, rho, budget.iters, v);
      prob.split(v, x1, x2);
      Eigen::VectorXd res;
      prob.residual(v, 1.0, res, nullptr);
      const auto np = static_cast<Eigen::Index>(prob.pairs.size());
      const double value = res.head(np).norm();
      const double feas = res.segment(np, np).norm();
      const double dist = (x1 * x1.transpose() - x2 * x2.transpose()).norm();
      if (feas <= feasibility_tol && dist >= separation && (!best.value || value < *best.value)) {
        best.value = value;
        best.witness.emplace(FactorMatrix(x1), FactorMatrix(x2));
        best.separation_achieved = dist;
        best.feasibility_residual = feas;
      }
    }
  }
  return best;
}

}  // namespace mcland

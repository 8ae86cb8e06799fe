#pragma once

#include <cstdint>
#include <functional>
#include <string_view>

#include "mcland/landscape.hpp"

namespace mcland {

/// Radial initialization: i.i.d. N(0, sigma^2) entries, or uniform in the
/// Frobenius ball of the given radius.
struct InitDistribution {
  enum class Kind { Gaussian, Ball };
  Kind kind = Kind::Gaussian;
  double scale = 1.0;

  static InitDistribution gaussian(double sigma);
  static InitDistribution ball(double radius);
};

FactorMatrix sample_radial_init(const InitDistribution& dist, int n, int r, std::uint64_t seed);

/// Zero fields are filled in by resolve_gd_config.
struct GdConfig {
  double step = 0.0;
  std::int64_t max_iters = 200000;
  double grad_tol = 0.0;
  double divergence_bound = 0.0;
  /// Step halvings allowed before a run is declared Diverged.
  int max_halvings = 60;
};

/// Defaults: grad_tol = 1e-9 (1 + ||M*_Omega||_F), divergence_bound =
/// 10 (1 + ||X*||_F), step = 0.25 / (4 (||M*_Omega||_F + 3 rho^2)) with
/// rho = max(||X0||_F, ||X*||_F).
GdConfig resolve_gd_config(const Landscape& landscape, const Eigen::MatrixXd& x0, GdConfig cfg);

enum class RunStatus { Converged, MaxIters, Diverged };
std::string_view to_string(RunStatus status);

struct RunResult {
  FactorMatrix final_point;
  double final_objective = 0.0;
  double final_grad_norm = 0.0;
  std::int64_t iterations = 0;
  RunStatus status = RunStatus::MaxIters;
  /// Step in force at the end of the run, after any halving.
  double step = 0.0;
};

/// Called with (iteration, iterate) for every accepted iterate, starting at 0.
using GdObserver = std::function<void(std::int64_t, const Eigen::MatrixXd&)>;

/// Explicit Euler on the gradient flow with a constant step. The step is
/// halved whenever the objective would increase.
RunResult gradient_descent(const Landscape& landscape, const Eigen::MatrixXd& x0, const GdConfig& cfg,
                           const GdObserver& observer = {});
RunResult gradient_descent(const McInstance& inst, const LossSpec& loss, const FactorMatrix& x0,
                           const GdConfig& cfg);

struct NewtonOptions {
  Subspace subspace = Subspace::Full;
  /// 0 selects 1e-12 (1 + ||M*_Omega||_F).
  double tol = 0.0;
  /// Inputs with a larger gradient norm are rejected; 0 selects 1e-3 (1 + ||M*_Omega||_F).
  double coarse_tol = 0.0;
  int max_steps = 50;
  double max_condition = 1e12;
};

/// Damped Newton on vec(X) with the dense Hessian. With the lower-triangular
/// tangent the point is first moved onto W by the restriction map and only
/// the W coordinates are updated. Never returns a point with a larger
/// gradient norm than the input.
FactorMatrix newton_refine(const Landscape& landscape, const Eigen::MatrixXd& x, const NewtonOptions& opts);
FactorMatrix newton_refine(const McInstance& inst, const LossSpec& loss, const FactorMatrix& x,
                           Subspace subspace, double tol = 0.0);

enum class Classification { GlobalMin, SpuriousLocalMin, StrictSaddle, Degenerate, NotCritical };
std::string_view to_string(Classification c);

struct ClassifyTolerances {
  double crit_tol;
  double global_tol;
  double eig_tol;
  /// crit_tol = 1e-8 (1 + s), global_tol = 1e-14 s^2, eig_tol = 1e-7 (1 + s), s = ||M*_Omega||_F.
  static ClassifyTolerances defaults(const Landscape& landscape);
};

struct PointAssessment {
  double objective = 0.0;
  double grad_norm = 0.0;
  /// Smallest Hessian eigenvalue; lower-triangular tangent at phi(X) when r > 1.
  double lambda_min = 0.0;
  Classification classification = Classification::NotCritical;
};

PointAssessment assess_point(const Landscape& landscape, const Eigen::MatrixXd& x,
                             const ClassifyTolerances& tols);
Classification classify_critical_point(const McInstance& inst, const LossSpec& loss,
                                       const FactorMatrix& x, const ClassifyTolerances& tols);
Classification classify_critical_point(const McInstance& inst, const LossSpec& loss,
                                       const FactorMatrix& x);

/// ||X X^T - M*||_F <= rel_tol ||M*||_F.
bool is_success(const McInstance& inst, const FactorMatrix& x_hat, double rel_tol = 1e-4);

}  // namespace mcland

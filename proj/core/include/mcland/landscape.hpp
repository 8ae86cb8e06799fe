#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mcland/instance.hpp"

namespace mcland {

/// g(R) = ||R_Omega||_F^2, optionally plus Q(X) = lambda sum_i (||X_i|| - alpha)_+^4
/// over the rows X_i of X.
struct LossSpec {
  enum class Kind { L2, L2Regularized };
  Kind kind = Kind::L2;
  double lambda = 0.0;
  double alpha = 0.0;

  static LossSpec l2() { return {}; }
  static LossSpec regularized(double lambda, double alpha);
  bool regularized() const { return kind == Kind::L2Regularized; }
};

enum class Subspace {
  Full,
  /// Directions whose first r rows are lower triangular: the tangent space of
  /// the restriction map's image.
  LowerTriangularTangent,
};

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Objective f(X) = g[(X X^T - M*)_Omega] (+ Q) over one instance, with the
/// observed entries cached as an upper-triangular pair list.
class Landscape {
 public:
  Landscape(const McInstance& inst, LossSpec loss = {});

  int n() const { return n_; }
  int r() const { return r_; }
  const LossSpec& loss() const { return loss_; }
  /// ||M*_Omega||_F
  double observed_norm() const { return observed_norm_; }
  /// ||X*||_F of the instance's ground-truth factor.
  double factor_norm() const { return factor_norm_; }

  double objective(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd gradient(const Eigen::MatrixXd& x) const;
  /// f and grad f in one pass over Omega; both buffers are row-major n x r.
  double evaluate(const double* x, double* grad) const;
  /// Delta : Hess f(X) : Delta
  double hessian_quadratic(const Eigen::MatrixXd& x, const Eigen::MatrixXd& delta) const;
  /// Dense nr x nr Hessian on vec(X) (column-major: entry (i, a) -> i + n a).
  Eigen::MatrixXd dense_hessian(const Eigen::MatrixXd& x) const;

 private:
  void check_shape(const Eigen::MatrixXd& x) const;

  struct Pair {
    int i;
    int j;
    double m;
  };
  int n_;
  int r_;
  LossSpec loss_;
  std::vector<Pair> pairs_;
  double observed_norm_;
  double factor_norm_;
};

/// Hessian of f at a fixed base point; the residual is computed once.
class HessianOperator {
 public:
  HessianOperator(const Landscape& landscape, Eigen::MatrixXd x);
  double quadratic(const Eigen::MatrixXd& delta) const;
  const Eigen::MatrixXd& dense() const { return dense_; }

 private:
  const Landscape* landscape_;
  Eigen::MatrixXd x_;
  Eigen::MatrixXd dense_;
};

double objective(const McInstance& inst, const LossSpec& loss, const FactorMatrix& x);
FactorMatrix gradient(const McInstance& inst, const LossSpec& loss, const FactorMatrix& x);
double hessian_quadratic(const McInstance& inst, const LossSpec& loss, const FactorMatrix& x,
                         const FactorMatrix& delta);

/// vec(X) indices kept by a subspace, ascending.
std::vector<Eigen::Index> subspace_indices(int n, int r, Subspace subspace);

struct EigenPair {
  double value;
  FactorMatrix direction;
};

/// Smallest eigenvalue of the (restricted) dense Hessian and its unit
/// eigen-direction, embedded back into n x r.
EigenPair min_hessian_eigen(const Landscape& landscape, const Eigen::MatrixXd& x, Subspace subspace);
EigenPair min_hessian_eigen(const McInstance& inst, const LossSpec& loss, const FactorMatrix& x,
                            Subspace subspace);

/// phi(X) = R from X = R Q: rows 0..r-1 lower triangular with nonnegative
/// diagonal, R R^T = X X^T. Zero diagonal entries take the + orientation.
FactorMatrix restriction_map(const FactorMatrix& x);

/// Orbit representative. r = 1: first entry with |x_i| > 1e-9 made positive.
/// r > 1: restriction_map, then each column's first such entry made positive.
FactorMatrix canonicalize(const FactorMatrix& x);

inline constexpr double kCanonicalZero = 1e-9;

}  // namespace mcland

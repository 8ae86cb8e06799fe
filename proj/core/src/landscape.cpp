#include "mcland/landscape.hpp"

#include <cmath>

#include "mcland/error.hpp"

namespace mcland {

LossSpec LossSpec::regularized(double lambda, double alpha) {
  if (!(lambda > 0.0) || !(alpha > 0.0)) {
    throw Error(ErrorCode::InvalidParams, "regularizer needs lambda > 0 and alpha > 0");
  }
  return {Kind::L2Regularized, lambda, alpha};
}

Landscape::Landscape(const McInstance& inst, LossSpec loss)
    : n_(inst.n()), r_(inst.r()), loss_(loss), observed_norm_(inst.observed_norm()),
      factor_norm_(inst.ground_truth().matrix().norm()) {
  pairs_.reserve(inst.observed().size());
  for (const auto& e : inst.observed()) pairs_.push_back({e.row, e.col, e.value});
}

void Landscape::check_shape(const Eigen::MatrixXd& x) const {
  if (x.rows() != n_ || x.cols() != r_) {
    throw Error(ErrorCode::DimensionMismatch, "factor shape differs from the instance (n, r)");
  }
}

double Landscape::evaluate(const double* x, double* grad) const {
  const int r = r_;
  std::fill(grad, grad + static_cast<std::ptrdiff_t>(n_) * r, 0.0);
  double f = 0.0;
  if (r == 1) {
    for (const Pair& p : pairs_) {
      const double xi = x[p.i];
      const double xj = x[p.j];
      const double res = xi * xj - p.m;
      if (p.i == p.j) {
        f += res * res;
        grad[p.i] += 4.0 * res * xi;
      } else {
        f += 2.0 * res * res;
        grad[p.i] += 4.0 * res * xj;
        grad[p.j] += 4.0 * res * xi;
      }
    }
  } else {
    for (const Pair& p : pairs_) {
      const double* xi = x + static_cast<std::ptrdiff_t>(p.i) * r;
      const double* xj = x + static_cast<std::ptrdiff_t>(p.j) * r;
      double dot = 0.0;
      for (int a = 0; a < r; ++a) dot += xi[a] * xj[a];
      const double res = dot - p.m;
      double* gi = grad + static_cast<std::ptrdiff_t>(p.i) * r;
      if (p.i == p.j) {
        f += res * res;
        for (int a = 0; a < r; ++a) gi[a] += 4.0 * res * xi[a];
      } else {
        f += 2.0 * res * res;
        double* gj = grad + static_cast<std::ptrdiff_t>(p.j) * r;
        for (int a = 0; a < r; ++a) {
          gi[a] += 4.0 * res * xj[a];
          gj[a] += 4.0 * res * xi[a];
        }
      }
    }
  }
  if (loss_.regularized()) {
    for (int i = 0; i < n_; ++i) {
      const double* xi = x + static_cast<std::ptrdiff_t>(i) * r;
      double sq = 0.0;
      for (int a = 0; a < r; ++a) sq += xi[a] * xi[a];
      const double s = std::sqrt(sq);
      if (s <= loss_.alpha) continue;
      const double d = s - loss_.alpha;
      f += loss_.lambda * d * d * d * d;
      const double c = 4.0 * loss_.lambda * d * d * d / s;
      double* gi = grad + static_cast<std::ptrdiff_t>(i) * r;
      for (int a = 0; a < r; ++a) gi[a] += c * xi[a];
    }
  }
  return f;
}

double Landscape::objective(const Eigen::MatrixXd& x) const {
  check_shape(x);
  const RowMajorMatrix xr = x;
  RowMajorMatrix g(n_, r_);
  return evaluate(xr.data(), g.data());
}

Eigen::MatrixXd Landscape::gradient(const Eigen::MatrixXd& x) const {
  check_shape(x);
  const RowMajorMatrix xr = x;
  RowMajorMatrix g(n_, r_);
  evaluate(xr.data(), g.data());
  return g;
}

double Landscape::hessian_quadratic(const Eigen::MatrixXd& x, const Eigen::MatrixXd& delta) const {
  check_shape(x);
  check_shape(delta);
  double q = 0.0;
  for (const Pair& p : pairs_) {
    const double w = p.i == p.j ? 1.0 : 2.0;
    const double res = x.row(p.i).dot(x.row(p.j)) - p.m;
    const double lin = x.row(p.i).dot(delta.row(p.j)) + delta.row(p.i).dot(x.row(p.j));
    q += w * (4.0 * res * delta.row(p.i).dot(delta.row(p.j)) + 2.0 * lin * lin);
  }
  if (loss_.regularized()) {
    for (int i = 0; i < n_; ++i) {
      const double s = x.row(i).norm();
      if (s <= loss_.alpha) continue;
      const double d = s - loss_.alpha;
      const double along = x.row(i).dot(delta.row(i)) / s;
      const double total = delta.row(i).squaredNorm();
      q += 12.0 * loss_.lambda * d * d * along * along +
           4.0 * loss_.lambda * d * d * d / s * (total - along * along);
    }
  }
  return q;
}

Eigen::MatrixXd Landscape::dense_hessian(const Eigen::MatrixXd& x) const {
  check_shape(x);
  const Eigen::Index n = n_;
  const int r = r_;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n * r, n * r);
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(2 * r));
  std::vector<double> jac(static_cast<std::size_t>(2 * r));
  for (const Pair& p : pairs_) {
    const double res = x.row(p.i).dot(x.row(p.j)) - p.m;
    if (p.i == p.j) {
      for (int a = 0; a < r; ++a) h(p.i + n * a, p.i + n * a) += 4.0 * res;
      for (int a = 0; a < r; ++a) {
        for (int b = 0; b < r; ++b) {
          h(p.i + n * a, p.i + n * b) += 2.0 * (2.0 * x(p.i, a)) * (2.0 * x(p.i, b));
        }
      }
      continue;
    }
    for (int a = 0; a < r; ++a) {
      h(p.i + n * a, p.j + n * a) += 4.0 * res;
      h(p.j + n * a, p.i + n * a) += 4.0 * res;
      idx[a] = p.i + n * a;
      jac[a] = x(p.j, a);
      idx[r + a] = p.j + n * a;
      jac[r + a] = x(p.i, a);
    }
    // Both orderings (i, j) and (j, i) share this Jacobian row.
    for (int u = 0; u < 2 * r; ++u) {
      for (int v = 0; v < 2 * r; ++v) h(idx[u], idx[v]) += 4.0 * jac[u] * jac[v];
    }
  }
  if (loss_.regularized()) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double s = x.row(i).norm();
      if (s <= loss_.alpha) continue;
      const double d = s - loss_.alpha;
      const Eigen::VectorXd u = x.row(i).transpose() / s;
      const Eigen::MatrixXd block =
          12.0 * loss_.lambda * d * d * u * u.transpose() +
          4.0 * loss_.lambda * d * d * d / s *
              (Eigen::MatrixXd::Identity(r, r) - u * u.transpose());
      for (int a = 0; a < r; ++a) {
        for (int b = 0; b < r; ++b) h(i + n * a, i + n * b) += block(a, b);
      }
    }
  }
  return h;
}

HessianOperator::HessianOperator(const Landscape& landscape, Eigen::MatrixXd x)
    : landscape_(&landscape), x_(std::move(x)), dense_(landscape.dense_hessian(x_)) {}

double HessianOperator::quadratic(const Eigen::MatrixXd& delta) const {
  return landscape_->hessian_quadratic(x_, delta);
}

double objective(const McInstance& inst, const LossSpec& loss, const FactorMatrix& x) {
  return Landscape(inst, loss).objective(x.matrix());
}

FactorMatrix gradient(const McInstance& inst, const LossSpec& loss, const FactorMatrix& x) {
  return FactorMatrix(Landscape(inst, loss).gradient(x.matrix()));
}

double hessian_quadratic(const McInstance& inst, const LossSpec& loss, const FactorMatrix& x,
                         const FactorMatrix& delta) {
  return Landscape(inst, loss).hessian_quadratic(x.matrix(), delta.matrix());
}

std::vector<Eigen::Index> subspace_indices(int n, int r, Subspace subspace) {
  if (subspace == Subspace::LowerTriangularTangent && r > n) {
    throw Error(ErrorCode::DimensionMismatch, "lower triangular tangent needs r <= n");
  }
  std::vector<Eigen::Index> keep;
  for (int a = 0; a < r; ++a) {
    for (int i = 0; i < n; ++i) {
      if (subspace == Subspace::LowerTriangularTangent && i < r && a > i) continue;
      keep.push_back(i + static_cast<Eigen::Index>(n) * a);
    }
  }
  return keep;
}

EigenPair min_hessian_eigen(const Landscape& landscape, const Eigen::MatrixXd& x, Subspace subspace) {
  const Eigen::MatrixXd h = landscape.dense_hessian(x);
  const auto keep = subspace_indices(landscape.n(), landscape.r(), subspace);
  const Eigen::MatrixXd sub = h(keep, keep);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sub);
  const Eigen::VectorXd v = eig.eigenvectors().col(0);
  Eigen::MatrixXd dir = Eigen::MatrixXd::Zero(landscape.n(), landscape.r());
  for (std::size_t k = 0; k < keep.size(); ++k) dir.data()[keep[k]] = v(static_cast<Eigen::Index>(k));
  return {eig.eigenvalues()(0), FactorMatrix(std::move(dir))};
}

EigenPair min_hessian_eigen(const McInstance& inst, const LossSpec& loss, const FactorMatrix& x,
                            Subspace subspace) {
  return min_hessian_eigen(Landscape(inst, loss), x.matrix(), subspace);
}

FactorMatrix restriction_map(const FactorMatrix& x) {
  const int r = x.r();
  if (r > x.n()) throw Error(ErrorCode::DimensionMismatch, "restriction map needs r <= n");
  const Eigen::MatrixXd lead_t = x.matrix().topRows(r).transpose();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(lead_t);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(r, r);
  const Eigen::MatrixXd u = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int a = 0; a < r; ++a) {
    if (u(a, a) < 0.0) q.col(a) = -q.col(a);
  }
  Eigen::MatrixXd out = x.matrix() * q;
  for (int i = 0; i < r; ++i) {
    for (int a = i + 1; a < r; ++a) out(i, a) = 0.0;
  }
  return FactorMatrix(std::move(out));
}

FactorMatrix canonicalize(const FactorMatrix& x) {
  Eigen::MatrixXd out = x.r() > 1 ? restriction_map(x).matrix() : x.matrix();
  for (Eigen::Index a = 0; a < out.cols(); ++a) {
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      if (std::abs(out(i, a)) > kCanonicalZero) {
        if (out(i, a) < 0.0) out.col(a) = -out.col(a);
        break;
      }
    }
  }
  return FactorMatrix(std::move(out));
}

}  // namespace mcland

#pragma once

#include <algorithm>
#include <cmath>

#include "mcland/landscape.hpp"
#include "mcland/rng.hpp"

namespace mcland::testing {

/// example1_path graph, canonical x* on the odd labels, perturbed by gamma.
inline McInstance example1(int n, double gamma, std::uint64_t seed) {
  const auto g = build_named_pattern(Pattern::Example1Path, {n});
  VertexSet s;
  for (int v = 0; v < n; v += 2) s.push_back(v);
  const auto x = perturb(build_canonical_ground_truth(g, s, n, 1), gamma, seed);
  return assemble_instance(x, induce_measurement_set(g, n, 1), g);
}

/// Star on 4 block-vertices, r = 2, S = the three leaves.
inline McInstance star_instance(double gamma, std::uint64_t seed) {
  const auto g = build_named_pattern(Pattern::Star, {4, 0, 2});
  const auto x = perturb(build_canonical_ground_truth(g, {1, 2, 3}, 8, 2), gamma, seed);
  return assemble_instance(x, induce_measurement_set(g, 8, 2), g);
}

/// Gaussian ground truth on a repaired G(m, 0.3), m = n / r.
inline McInstance random_instance(int n, int r, std::uint64_t seed) {
  const int m = n / r;
  VertexSet s{0};
  if (m > 3) s.push_back(m - 1);
  const auto g = build_erdos_renyi(m, 0.3, s, seed);
  return assemble_instance(build_random_ground_truth(n, r, seed + 1), induce_measurement_set(g, n, r), g);
}

inline Eigen::MatrixXd random_orthogonal(int r, Rng& rng) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(rng.gaussian_matrix(r, r));
  return qr.householderQ() * Eigen::MatrixXd::Identity(r, r);
}

/// Row signs constant on each r-row block.
inline Eigen::VectorXd random_block_signs(int m, int r, Rng& rng) {
  Eigen::VectorXd d(m * r);
  for (int b = 0; b < m; ++b) d.segment(b * r, r).setConstant(rng.below(2) ? 1.0 : -1.0);
  return d;
}

/// Relative error of the analytic gradient against central differences.
inline double gradient_fd_error(const Landscape& land, const Eigen::MatrixXd& x) {
  const double h = 1e-5 * (1.0 + x.norm());
  const Eigen::MatrixXd g = land.gradient(x);
  Eigen::MatrixXd fd(x.rows(), x.cols());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Eigen::MatrixXd xp = x, xm = x;
    xp.data()[k] += h;
    xm.data()[k] -= h;
    fd.data()[k] = (land.objective(xp) - land.objective(xm)) / (2.0 * h);
  }
  return (fd - g).norm() / std::max(g.norm(), 1e-300);
}

/// Relative error of the Hessian quadratic form against a second difference
/// of the objective along delta / ||delta||, Richardson-extrapolated over t
/// and t / 2 (exact for the quartic l2 objective up to rounding).
inline double hessian_fd_error(const Landscape& land, const Eigen::MatrixXd& x, const Eigen::MatrixXd& delta) {
  const Eigen::MatrixXd d = delta / delta.norm();
  const double f0 = land.objective(x);
  auto second = [&](double t) {
    return (land.objective(x + t * d) - 2.0 * f0 + land.objective(x - t * d)) / (t * t);
  };
  const double t = 1e-3 * (1.0 + x.norm());
  const double fd = (4.0 * second(t / 2.0) - second(t)) / 3.0;
  const double exact = land.hessian_quadratic(x, d);
  return std::abs(fd - exact) / std::max(std::abs(exact), 1e-300);
}

}  // namespace mcland::testing

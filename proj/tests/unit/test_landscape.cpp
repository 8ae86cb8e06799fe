#include <gtest/gtest.h>

#include "mcland/error.hpp"
#include "mcland/landscape.hpp"
#include "mcland/rng.hpp"
#include "test_support.hpp"

using namespace mcland;
using namespace mcland::testing;

TEST(Landscape, ZeroAtGroundTruth) {
  const auto inst = example1(6, 0.05, 3);
  EXPECT_NEAR(objective(inst, LossSpec::l2(), inst.ground_truth()), 0.0, 1e-28);
  EXPECT_LE(gradient(inst, LossSpec::l2(), inst.ground_truth()).matrix().norm(), 1e-14);
}

TEST(Landscape, HandExpandedValue) {
  // M* = I_2 fully observed, X X^T = all-ones: two off-diagonal unit residuals.
  const BlockSparsityGraph g(1, {{0, 0}}, {});
  const auto inst = assemble_instance(FactorMatrix(Eigen::MatrixXd::Identity(2, 2)), induce_measurement_set(g, 2, 2));
  const Eigen::MatrixXd x = (Eigen::MatrixXd(2, 2) << 1, 0, 1, 0).finished();
  EXPECT_DOUBLE_EQ(objective(inst, LossSpec::l2(), FactorMatrix(x)), 2.0);
}

TEST(Landscape, RegularizerInactiveBelowAlpha) {
  const auto inst = random_instance(12, 2, 4);
  Rng rng(1);
  const FactorMatrix x(rng.gaussian_matrix(12, 2));
  const double alpha = x.matrix().rowwise().norm().maxCoeff() + 0.1;
  EXPECT_EQ(objective(inst, LossSpec::regularized(3.0, alpha), x), objective(inst, LossSpec::l2(), x));
  EXPECT_GT(objective(inst, LossSpec::regularized(3.0, 0.1), x), objective(inst, LossSpec::l2(), x));
}

TEST(Landscape, DimensionMismatch) {
  const auto inst = example1(4, 0.0, 0);
  try {
    objective(inst, LossSpec::l2(), FactorMatrix::zeros(5, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(Landscape, GradientAndHessianMatchFiniteDifferences) {
  Rng rng(2024);
  for (int draw = 0; draw < 100; ++draw) {
    const int r = 1 + draw % 3;
    const int n = r * (2 + static_cast<int>(rng.below(30 / r - 1)));
    const auto inst = random_instance(n, r, 500 + draw);
    const LossSpec loss = draw % 4 == 3 ? LossSpec::regularized(0.7, 0.5) : LossSpec::l2();
    const Landscape land(inst, loss);
    const Eigen::MatrixXd x = rng.gaussian_matrix(n, r);
    EXPECT_LE(gradient_fd_error(land, x), 1e-6) << "draw " << draw;
    const Eigen::MatrixXd delta = rng.gaussian_matrix(n, r);
    EXPECT_LE(hessian_fd_error(land, x, delta), 1e-5) << "draw " << draw;
  }
}

TEST(Landscape, DenseHessianMatchesQuadraticForm) {
  Rng rng(7);
  for (int draw = 0; draw < 30; ++draw) {
    const int r = 1 + draw % 3;
    const int n = 3 * r + draw % 4;
    const auto inst = random_instance(n, r, 50 + draw);
    const LossSpec loss = draw % 2 ? LossSpec::regularized(1.3, 0.4) : LossSpec::l2();
    const Landscape land(inst, loss);
    const Eigen::MatrixXd x = rng.gaussian_matrix(n, r);
    const HessianOperator h(land, x);
    EXPECT_LE((h.dense() - h.dense().transpose()).norm(), 1e-12 * h.dense().norm());
    for (int k = 0; k < 5; ++k) {
      const Eigen::MatrixXd d = rng.gaussian_matrix(n, r);
      const Eigen::Map<const Eigen::VectorXd> v(d.data(), d.size());
      const double dense = v.dot(h.dense() * v);
      EXPECT_NEAR(dense, h.quadratic(d), 1e-10 * (1.0 + std::abs(dense)));
    }
  }
}

TEST(Landscape, ZeroDirectionHasZeroCurvature) {
  const auto inst = example1(5, 0.1, 2);
  EXPECT_EQ(hessian_quadratic(inst, LossSpec::l2(), inst.ground_truth(), FactorMatrix::zeros(5, 1)), 0.0);
}

TEST(Landscape, Example1CurvatureAlongLastCoordinate) {
  const auto inst = example1(4, 0.0, 0);
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(4, 1);
  e(3) = 1.0;
  EXPECT_NEAR(hessian_quadratic(inst, LossSpec::l2(), inst.ground_truth(), FactorMatrix(e)), 4.0, 1e-12);
}

TEST(Landscape, Example1MinEigenvalues) {
  const auto odd = example1(5, 0.0, 0);
  EXPECT_NEAR(min_hessian_eigen(odd, LossSpec::l2(), odd.ground_truth(), Subspace::Full).value, 8.0, 1e-9);

  for (int n : {5, 6}) {
    const auto inst = example1(n, 0.0, 0);
    const auto zero = FactorMatrix::zeros(n, 1);
    const double along = hessian_quadratic(inst, LossSpec::l2(), zero, inst.ground_truth());
    EXPECT_NEAR(along, -4.0 * ((n + 1) / 2), 1e-12);
    EXPECT_LT(min_hessian_eigen(inst, LossSpec::l2(), zero, Subspace::Full).value, 0.0);
  }
}

TEST(Landscape, RankTwoGlobalMinPositiveOnTangent) {
  // Hub last, so block 0 lies in S = the non-hub vertices and pins the rotation.
  const auto g = build_named_pattern(Pattern::AugmentedCross, {4, 3, 2});
  const auto inst = assemble_instance(build_canonical_ground_truth(g, {0, 1, 2}, 8, 2), induce_measurement_set(g, 8, 2), g);
  const FactorMatrix x = restriction_map(inst.ground_truth());
  EXPECT_GT(min_hessian_eigen(inst, LossSpec::l2(), x, Subspace::LowerTriangularTangent).value, 1e-6);
  // The full space has rotation directions of zero curvature.
  EXPECT_NEAR(min_hessian_eigen(inst, LossSpec::l2(), x, Subspace::Full).value, 0.0, 1e-10);
}

TEST(Landscape, TangentNeedsFirstBlockInSupport) {
  // Star hub is vertex 0 and X*_0 = 0, so the lower-triangular constraint on
  // block 0 leaves the rotation orbit free.
  const auto inst = star_instance(0.0, 0);
  EXPECT_NEAR(min_hessian_eigen(inst, LossSpec::l2(), inst.ground_truth(), Subspace::LowerTriangularTangent).value, 0.0,
              1e-10);
}

TEST(Landscape, SubspaceIndices) {
  const auto idx = subspace_indices(4, 2, Subspace::LowerTriangularTangent);
  EXPECT_EQ(idx.size(), 7u);
  EXPECT_EQ(std::count(idx.begin(), idx.end(), 4), 0);
  EXPECT_EQ(subspace_indices(4, 2, Subspace::Full).size(), 8u);
}

TEST(Landscape, SignEquivariantGradient) {
  const auto inst = star_instance(0.0, 0);
  Rng rng(3);
  for (int k = 0; k < 50; ++k) {
    const Eigen::MatrixXd x = rng.gaussian_matrix(8, 2);
    const Eigen::VectorXd d = random_block_signs(4, 2, rng);
    const Eigen::MatrixXd lhs = gradient(inst, LossSpec::l2(), FactorMatrix(d.asDiagonal() * x)).matrix();
    const Eigen::MatrixXd rhs = d.asDiagonal() * gradient(inst, LossSpec::l2(), FactorMatrix(x)).matrix();
    EXPECT_EQ(lhs, rhs);
  }
}

TEST(Landscape, OrbitInvariantObjective) {
  Rng rng(5);
  for (int r = 1; r <= 3; ++r) {
    const auto inst = random_instance(6 * r, r, 90 + r);
    for (int k = 0; k < 10; ++k) {
      const Eigen::MatrixXd x = rng.gaussian_matrix(6 * r, r);
      const Eigen::MatrixXd q = random_orthogonal(r, rng);
      const double f = objective(inst, LossSpec::l2(), FactorMatrix(x));
      EXPECT_NEAR(objective(inst, LossSpec::l2(), FactorMatrix(x * q)), f, 1e-10 * (1.0 + f));
    }
  }
}

TEST(Landscape, L2LossAtTheOrigin) {
  // g(R) = ||R_Omega||^2: g(0) = 0, zero gradient, Hessian 2 I on the support.
  const auto inst = random_instance(6, 2, 1);
  const FactorMatrix x = inst.ground_truth();
  EXPECT_EQ(objective(inst, LossSpec::l2(), x), 0.0);
  Rng rng(9);
  for (int k = 0; k < 5; ++k) {
    const Eigen::MatrixXd d = rng.gaussian_matrix(6, 2);
    // At zero residual the quadratic form is exactly 2 ||(X D^T + D X^T)_Omega||^2.
    const Eigen::MatrixXd lin = x.matrix() * d.transpose() + d * x.matrix().transpose();
    double expected = 0.0;
    for (const auto& [i, j] : inst.omega().entries()) expected += 2.0 * lin(i, j) * lin(i, j);
    EXPECT_NEAR(hessian_quadratic(inst, LossSpec::l2(), x, FactorMatrix(d)), expected, 1e-10 * expected);
  }
}

TEST(RestrictionMap, LowerTriangularFixedPoint) {
  Eigen::MatrixXd x(5, 3);
  x << 2, 0, 0, 1, 3, 0, -1, 2, 1, 4, 5, 6, 7, 8, 9;
  EXPECT_LE((restriction_map(FactorMatrix(x)).matrix() - x).norm(), 1e-12);
}

TEST(RestrictionMap, RecoversFactorAfterRotation) {
  Rng rng(4);
  for (int r = 1; r <= 4; ++r) {
    for (int k = 0; k < 10; ++k) {
      Eigen::MatrixXd lower = rng.gaussian_matrix(2 * r + 1, r);
      for (int i = 0; i < r; ++i) {
        for (int a = i + 1; a < r; ++a) lower(i, a) = 0.0;
        lower(i, i) = std::abs(lower(i, i)) + 0.5;
      }
      const Eigen::MatrixXd q = random_orthogonal(r, rng);
      const FactorMatrix out = restriction_map(FactorMatrix(lower * q));
      EXPECT_LE((out.matrix() - lower).norm(), 1e-10 * lower.norm());
    }
  }
}

TEST(RestrictionMap, PreservesGram) {
  Rng rng(8);
  for (int k = 0; k < 20; ++k) {
    const Eigen::MatrixXd x = rng.gaussian_matrix(7, 3);
    const Eigen::MatrixXd out = restriction_map(FactorMatrix(x)).matrix();
    EXPECT_LE((out * out.transpose() - x * x.transpose()).norm(), 1e-10 * (x * x.transpose()).norm());
    for (int i = 0; i < 3; ++i) {
      EXPECT_GE(out(i, i), 0.0);
      for (int a = i + 1; a < 3; ++a) EXPECT_EQ(out(i, a), 0.0);
    }
  }
}

TEST(Canonicalize, SignAndRotationOrbits) {
  Rng rng(6);
  for (int k = 0; k < 20; ++k) {
    const FactorMatrix x(rng.gaussian_matrix(6, 1));
    EXPECT_EQ(canonicalize(x), canonicalize(FactorMatrix(-x.matrix())));
  }
  for (int r = 2; r <= 3; ++r) {
    for (int k = 0; k < 20; ++k) {
      const Eigen::MatrixXd x = rng.gaussian_matrix(8, r);
      const Eigen::MatrixXd q = random_orthogonal(r, rng);
      EXPECT_LE((canonicalize(FactorMatrix(x * q)).matrix() - canonicalize(FactorMatrix(x)).matrix()).norm(), 1e-8);
    }
  }
  EXPECT_TRUE(canonicalize(FactorMatrix::zeros(4, 2)).matrix().isZero());
  EXPECT_TRUE(canonicalize(FactorMatrix::zeros(4, 1)).matrix().isZero());
}

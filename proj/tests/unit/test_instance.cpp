#include <gtest/gtest.h>

#include "mcland/error.hpp"
#include "mcland/instance.hpp"

using namespace mcland;

TEST(Instance, CanonicalRankOne) {
  const auto g = build_named_pattern(Pattern::Example1Path, {4});
  const auto x = build_canonical_ground_truth(g, {0, 2}, 4, 1);
  EXPECT_EQ(x.matrix(), (Eigen::MatrixXd(4, 1) << 1, 0, 1, 0).finished());
}

TEST(Instance, CanonicalRankTwo) {
  const auto g = build_named_pattern(Pattern::Star, {4, 0, 2});
  const auto x = build_canonical_ground_truth(g, {1, 2, 3}, 8, 2);
  EXPECT_TRUE(x.block(0).isZero());
  for (int i = 1; i < 4; ++i) EXPECT_TRUE(x.block(i).isIdentity());
  Eigen::FullPivLU<Eigen::MatrixXd> lu(x.matrix() * x.matrix().transpose());
  EXPECT_EQ(lu.rank(), 2);
}

TEST(Instance, CanonicalEmptySAndErrors) {
  const auto g = build_named_pattern(Pattern::Example1Path, {4});
  EXPECT_TRUE(build_canonical_ground_truth(g, {}, 4, 1).matrix().isZero());
  try {
    build_canonical_ground_truth(g, {5}, 4, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidS);
  }
}

TEST(Instance, Perturb) {
  const auto x = build_random_ground_truth(7, 2, 3);
  EXPECT_EQ(perturb(x, 0.0, 5), x);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EXPECT_NEAR((perturb(x, 0.3, seed).matrix() - x.matrix()).norm(), 0.3, 1e-12);
  }
  EXPECT_EQ(perturb(x, 0.3, 9), perturb(x, 0.3, 9));
  const Eigen::MatrixXd d1 = perturb(x, 0.1, 4).matrix() - x.matrix();
  const Eigen::MatrixXd d2 = perturb(x, 0.7, 4).matrix() - x.matrix();
  EXPECT_LT((d1 / 0.1 - d2 / 0.7).norm(), 1e-12);
}

TEST(Instance, AssembleReadsObservedEntries) {
  const auto g = build_named_pattern(Pattern::Example1Path, {4});
  const auto x = build_canonical_ground_truth(g, {0, 2}, 4, 1);
  const auto inst = assemble_instance(x, induce_measurement_set(g, 4, 1), g);
  std::vector<double> diag;
  for (const auto& e : inst.observed()) {
    if (e.row == e.col) diag.push_back(e.value);
  }
  EXPECT_EQ(diag, (std::vector<double>{1, 0, 1, 0}));
  EXPECT_DOUBLE_EQ(inst.observed_norm(), std::sqrt(2.0));

  const auto star = build_named_pattern(Pattern::Star, {4, 0, 2});
  const auto inst2 = assemble_instance(build_canonical_ground_truth(star, {1, 2, 3}, 8, 2),
                                       induce_measurement_set(star, 8, 2), star);
  const Eigen::MatrixXd m = inst2.dense_ground_truth();
  for (int a = 1; a < 4; ++a) {
    for (int b = 1; b < 4; ++b) EXPECT_TRUE(m.block(2 * a, 2 * b, 2, 2).isIdentity());
  }
  try {
    assemble_instance(x, induce_measurement_set(build_named_pattern(Pattern::Example1Path, {5}), 5, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(Instance, Membership) {
  const auto g = build_named_pattern(Pattern::Example1Path, {4});
  const auto omega = induce_measurement_set(g, 4, 1);
  const auto x = build_canonical_ground_truth(g, {0, 2}, 4, 1);
  const auto plain = check_class_membership(assemble_instance(x, omega, g));
  EXPECT_TRUE(plain.psd_rank_r);
  EXPECT_FALSE(plain.all_blocks_full_rank);
  EXPECT_FALSE(plain.in_class);
  const auto perturbed = check_class_membership(assemble_instance(perturb(x, 0.05, 1), omega, g));
  EXPECT_TRUE(perturbed.in_class);

  const BlockSparsityGraph bip(4, {{0, 1}, {1, 2}, {2, 3}}, {});
  const auto report = check_class_membership(
      assemble_instance(build_random_ground_truth(4, 1, 2), induce_measurement_set(bip, 4, 1), bip));
  EXPECT_FALSE(report.g1_connected_nonbipartite);
  EXPECT_FALSE(report.in_class);

  try {
    check_class_membership(assemble_instance(x, omega));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingGraph);
  }
}

TEST(Instance, Incoherence) {
  const int n = 5;
  const BlockSparsityGraph g(1, {{0, 0}}, {});
  const auto full = induce_measurement_set(g, n, n);
  EXPECT_NEAR(compute_incoherence(assemble_instance(FactorMatrix(Eigen::MatrixXd::Identity(n, n)), full)), 1.0, 1e-12);

  const auto path = build_named_pattern(Pattern::Example1Path, {4});
  const auto omega = induce_measurement_set(path, 4, 1);
  const auto x = build_canonical_ground_truth(path, {0, 2}, 4, 1);
  EXPECT_NEAR(compute_incoherence(assemble_instance(x, omega)), 2.0, 1e-12);

  Eigen::MatrixXd e1 = Eigen::MatrixXd::Zero(4, 1);
  e1(0) = 1.0;
  EXPECT_NEAR(compute_incoherence(assemble_instance(FactorMatrix(e1), omega)), 4.0, 1e-12);
  try {
    compute_incoherence(assemble_instance(FactorMatrix::zeros(4, 1), omega));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroMatrix);
  }
}

TEST(Instance, CanonicalIncoherenceIsModest) {
  for (int m : {4, 6, 8, 10}) {
    const auto g = build_named_pattern(Pattern::Example1Path, {m});
    VertexSet s;
    for (int v = 0; v < m; v += 2) s.push_back(v);
    const auto x = perturb(build_canonical_ground_truth(g, s, m, 1), 0.01, 3);
    EXPECT_LE(compute_incoherence(assemble_instance(x, induce_measurement_set(g, m, 1))), 4.0);
  }
}

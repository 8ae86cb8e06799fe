#include <gtest/gtest.h>

#include "mcland/completion.hpp"
#include "mcland/error.hpp"
#include "mcland/rng.hpp"

using namespace mcland;

namespace {

McInstance make(const BlockSparsityGraph& g, const Eigen::MatrixXd& x, int n, int r, bool attach = true) {
  return assemble_instance(FactorMatrix(x), induce_measurement_set(g, n, r),
                           attach ? std::optional(g) : std::nullopt);
}

ErrorCode solve_error(const McInstance& inst) {
  try {
    solve_by_propagation(inst);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::IoError;
}

}  // namespace

TEST(Completion, TridiagonalRankOne) {
  const auto g = build_named_pattern(Pattern::Example1Path, {3});
  const Eigen::MatrixXd x = (Eigen::MatrixXd(3, 1) << 1, 0.5, 2).finished();
  const auto res = solve_by_propagation(make(g, x, 3, 1));
  EXPECT_LE(relative_completion_error(make(g, x, 3, 1), res.recovered_factor), 1e-10);
  EXPECT_NEAR(std::abs(res.recovered_factor(1, 0)), 0.5, 1e-12);
  EXPECT_NEAR(std::abs(res.recovered_factor(2, 0)), 2.0, 1e-12);
}

TEST(Completion, RandomRankTwoBlocks) {
  const auto g = build_erdos_renyi(4, 0.3, {0, 1}, 5);
  const auto x = build_random_ground_truth(8, 2, 17);
  const auto inst = make(g, x.matrix(), 8, 2);
  ASSERT_TRUE(check_class_membership(inst).in_class);
  const auto res = solve_by_propagation(inst);
  EXPECT_LE(relative_completion_error(inst, res.recovered_factor), 1e-8);
  // X_hat = X* R for an orthogonal R.
  const Eigen::MatrixXd rot = x.matrix().colPivHouseholderQr().solve(res.recovered_factor.matrix());
  EXPECT_LE((rot.transpose() * rot - Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-8);
}

TEST(Completion, TriangleChainWithoutSelfLoops) {
  const BlockSparsityGraph g(3, {{0, 1}, {1, 2}, {0, 2}}, {});
  for (int r = 1; r <= 3; ++r) {
    const int n = 3 * r + r - 1;
    const auto x = build_random_ground_truth(n, r, 40 + r);
    const auto inst = make(g, x.matrix(), n, r);
    EXPECT_LE(relative_completion_error(inst, solve_by_propagation(inst).recovered_factor), 1e-8) << r;
  }
  // Pentagon: chain of length five.
  const BlockSparsityGraph pent(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}}, {});
  const auto x = build_random_ground_truth(10, 2, 3);
  const auto inst = make(pent, x.matrix(), 10, 2);
  EXPECT_LE(relative_completion_error(inst, solve_by_propagation(inst).recovered_factor), 1e-8);
}

TEST(Completion, Errors) {
  const auto g = build_named_pattern(Pattern::Example1Path, {3});
  const Eigen::MatrixXd zero_mid = (Eigen::MatrixXd(3, 1) << 1, 0, 2).finished();
  EXPECT_EQ(solve_error(make(g, zero_mid, 3, 1)), ErrorCode::SingularBlock);

  const BlockSparsityGraph bip(4, {{0, 1}, {1, 2}, {2, 3}}, {});
  EXPECT_EQ(solve_error(make(bip, build_random_ground_truth(4, 1, 1).matrix(), 4, 1)), ErrorCode::NoOddCycle);

  const BlockSparsityGraph split(4, {{0, 0}, {0, 1}, {2, 2}, {2, 3}}, {});
  EXPECT_EQ(solve_error(make(split, build_random_ground_truth(4, 1, 1).matrix(), 4, 1)), ErrorCode::Disconnected);

}

TEST(Completion, RandomErdosRenyiInstances) {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const int r = 1 + static_cast<int>(rng.below(3));
    const int m = 3 + static_cast<int>(rng.below(60 / r - 3 + 1));
    const int n = m * r;
    VertexSet s{0};
    for (int v = 2; v < m; v += 3) s.push_back(v);
    const auto g = build_erdos_renyi(m, 0.3, s, 1000 + trial);
    const auto x = build_random_ground_truth(n, r, 2000 + trial);
    const auto inst = make(g, x.matrix(), n, r, trial % 2 == 0);
    const auto res = solve_by_propagation(inst);
    EXPECT_LE(relative_completion_error(inst, res.recovered_factor), 1e-8) << "trial " << trial;
  }
}

TEST(Completion, IdempotentOnFullObservation) {
  const auto g = build_named_pattern(Pattern::Example1Path, {5});
  const auto inst = make(g, build_random_ground_truth(10, 2, 8).matrix(), 10, 2);
  const FactorMatrix first = solve_by_propagation(inst).recovered_factor;
  const Eigen::MatrixXd m_hat = first.matrix() * first.matrix().transpose();

  std::vector<Edge> all;
  for (int a = 0; a < 5; ++a) {
    for (int b = a; b < 5; ++b) all.push_back({a, b});
  }
  const BlockSparsityGraph complete(5, all, {});
  const auto full = make(complete, first.matrix(), 10, 2);
  EXPECT_EQ(full.omega().size(), 100u);
  const FactorMatrix again = solve_by_propagation(full).recovered_factor;
  EXPECT_LE((again.matrix() * again.matrix().transpose() - m_hat).norm(), 1e-10 * m_hat.norm());
}

TEST(Completion, BorderRows) {
  const auto g = build_named_pattern(Pattern::Example2EvenCross, {4});
  const auto x = build_random_ground_truth(4 * 2 + 1, 2, 12);
  const auto inst = make(g, x.matrix(), 9, 2);
  EXPECT_LE(relative_completion_error(inst, solve_by_propagation(inst).recovered_factor), 1e-8);
}

TEST(Completion, OperationCountGrowsPolynomially) {
  std::vector<double> ratio;
  for (int m : {10, 20, 40}) {
    const int r = 2;
    const auto g = build_erdos_renyi(m, 0.3, {0, 1}, 3);
    const auto inst = make(g, build_random_ground_truth(m * r, r, 4).matrix(), m * r, r);
    const int n = m * r;
    const double model = static_cast<double>(n) * n / (r * r) + static_cast<double>(n) * r * r;
    ratio.push_back(static_cast<double>(solve_by_propagation(inst).operations_estimate) / model);
  }
  for (double q : ratio) EXPECT_LT(q, 10.0);
}

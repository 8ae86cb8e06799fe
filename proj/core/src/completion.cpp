#include "mcland/completion.hpp"

#include <optional>
#include <queue>
#include <string>

#include "mcland/error.hpp"

namespace mcland {
namespace {

constexpr double kPivotThreshold = 1e-12;

class BlockSolver {
 public:
  BlockSolver(const Eigen::MatrixXd& block, const char* what) : lu_(block) {
    lu_.setThreshold(kPivotThreshold);
    if (block.norm() == 0.0 || !lu_.isInvertible()) {
      throw Error(ErrorCode::SingularBlock, std::string(what) + " is rank deficient");
    }
  }
  /// B^{-1} rhs
  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const { return lu_.solve(rhs); }
  /// lhs B^{-T}
  Eigen::MatrixXd right_inverse_transpose(const Eigen::MatrixXd& lhs) const {
    return lu_.solve(lhs.transpose()).transpose();
  }

 private:
  Eigen::FullPivLU<Eigen::MatrixXd> lu_;
};

}  // namespace

CompletionResult solve_by_propagation(const McInstance& inst) {
  const BlockSparsityGraph g = inst.graph() ? *inst.graph() : infer_graph(inst.omega());
  const int n = inst.n();
  const int r = inst.r();
  const int m = g.m();

  Eigen::MatrixXd obs = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : inst.observed()) {
    obs(e.row, e.col) = e.value;
    obs(e.col, e.row) = e.value;
  }
  auto block = [&](int a, int b) -> Eigen::MatrixXd {
    return obs.block(static_cast<Eigen::Index>(a) * r, static_cast<Eigen::Index>(b) * r, r, r);
  };

  const auto cycle = find_odd_cycle(g);
  if (!cycle) throw Error(ErrorCode::NoOddCycle, "G1 is bipartite");
  const std::vector<Vertex>& c = *cycle;
  std::int64_t ops = 0;
  const std::int64_t r3 = static_cast<std::int64_t>(r) * r * r;

  // Chain M_{c0 c1} M_{c1 c2}^{-T} M_{c2 c3} M_{c3 c4}^{-T} ... M_{c_{2k} c0}.
  Eigen::MatrixXd gram;
  if (c.size() == 1) {
    gram = block(c[0], c[0]);
  } else {
    const std::size_t len = c.size();
    gram = block(c[0], c[1]);
    for (std::size_t i = 1; i + 1 < len; i += 2) {
      const BlockSolver inv(block(c[i], c[i + 1]), "chain block");
      gram = inv.right_inverse_transpose(gram) * block(c[i + 1], c[(i + 2) % len]);
      ops += 2 * r3;
    }
  }
  gram = 0.5 * (gram + gram.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::NotPSD, "anchor block is not positive definite");
  ops += r3;

  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, r);
  const Vertex anchor = c[0];
  x.middleRows(static_cast<Eigen::Index>(anchor) * r, r) = llt.matrixL();

  const auto adj = g.e1_adjacency();
  std::vector<char> seen(static_cast<std::size_t>(m), 0);
  std::queue<Vertex> queue;
  seen[anchor] = 1;
  queue.push(anchor);
  int reached = 1;
  while (!queue.empty()) {
    const Vertex i = queue.front();
    queue.pop();
    const Eigen::MatrixXd xi = x.middleRows(static_cast<Eigen::Index>(i) * r, r);
    std::optional<BlockSolver> inv;
    for (Vertex j : adj[i]) {
      ++ops;
      if (seen[j]) continue;
      if (!inv) inv.emplace(xi, "propagated block");
      // M_ij = X_i X_j^T  =>  X_j^T = X_i^{-1} M_ij
      x.middleRows(static_cast<Eigen::Index>(j) * r, r) = inv->solve(block(i, j)).transpose();
      ops += 2 * r3;
      seen[j] = 1;
      ++reached;
      queue.push(j);
    }
  }
  if (reached != m) throw Error(ErrorCode::Disconnected, "G1 is not connected");

  const int border = n - m * r;
  if (border > 0) {
    const BlockSolver inv(x.middleRows(static_cast<Eigen::Index>(anchor) * r, r), "anchor block");
    const Eigen::MatrixXd cross =
        obs.block(static_cast<Eigen::Index>(m) * r, static_cast<Eigen::Index>(anchor) * r, border, r);
    x.bottomRows(border) = inv.right_inverse_transpose(cross);
    ops += static_cast<std::int64_t>(border) * r * r;
  }
  return {FactorMatrix(std::move(x)), ops};
}

double relative_completion_error(const McInstance& inst, const FactorMatrix& x) {
  const Eigen::MatrixXd truth = inst.dense_ground_truth();
  const double scale = truth.norm();
  const double diff = (x.matrix() * x.matrix().transpose() - truth).norm();
  return scale > 0.0 ? diff / scale : diff;
}

}  // namespace mcland

#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "mcland/instance.hpp"

namespace mcland {

struct MetricBudget {
  /// Starts; the first half are warm starts built from a recovered factor.
  int restarts = 16;
  /// Levenberg-Marquardt iterations per penalty round.
  int iters = 200;
  int rounds = 5;
  double rho0 = 1e2;
  double rho_growth = 10.0;
};

/// Heuristic upper bound on dist(A(M*), T_A), T_A being the measurements
/// with two rank-r completions at least `separation` apart.
struct MetricEstimate {
  /// ||A(M*) - A(X1 X1^T)||_F of the best feasible pair; empty means NoPairFound.
  std::optional<double> value;
  std::optional<std::pair<FactorMatrix, FactorMatrix>> witness;
  /// ||X1 X1^T - X2 X2^T||_F of the witness.
  double separation_achieved = 0.0;
  /// ||A(X1 X1^T) - A(X2 X2^T)||_F of the witness.
  double feasibility_residual = 0.0;
  double separation = 0.0;
  double feasibility_tol = 0.0;
};

/// Penalty method: minimizes ||A(M*) - A(X1 X1^T)||^2 + rho ||A(X1 X1^T) - A(X2 X2^T)||^2
/// + rho (s' - ||X1 X1^T - X2 X2^T||_F)_+^2 over (X1, X2), s' slightly above the
/// separation, with rho raised every round. separation = 0 selects
/// 1e-3 ||M*||_F; feasibility_tol = 0 selects min(1e-6 (1 + ||A(M*)||_F), separation / 10).
MetricEstimate estimate_complexity_metric(const McInstance& inst, const MetricBudget& budget, double separation,
                                          std::uint64_t seed, double feasibility_tol = 0.0);

}  // namespace mcland

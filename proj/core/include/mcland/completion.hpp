#pragma once

#include <cstdint>

#include "mcland/instance.hpp"

namespace mcland {

struct CompletionResult {
  /// X* R for some orthogonal R.
  FactorMatrix recovered_factor;
  /// Rough operation count: graph traversal plus r x r block solves.
  std::int64_t operations_estimate = 0;
};

/// Recovers M* from the observed entries alone. Anchors on an odd cycle of
/// G1 (self-loop preferred), Cholesky-factors the anchor's diagonal block and
/// propagates block factors along a BFS tree of G1. Uses the instance graph,
/// or the graph inferred from Omega when none is attached.
CompletionResult solve_by_propagation(const McInstance& inst);

/// ||X X^T - M*||_F / ||M*||_F, computed densely.
double relative_completion_error(const McInstance& inst, const FactorMatrix& x);

}  // namespace mcland

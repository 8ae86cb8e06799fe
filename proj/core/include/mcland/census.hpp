#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mcland/optimizer.hpp"

namespace mcland {

/// One deduplicated critical point, stored as its canonical orbit representative.
struct CriticalPointRecord {
  FactorMatrix canonical_rep;
  double objective = 0.0;
  double grad_norm = 0.0;
  double lambda_min = 0.0;
  Classification classification = Classification::NotCritical;
  std::int64_t hit_count = 0;
  /// Distinct points in the orbit when r = 1 (2, or 1 for the origin); 0 for r > 1.
  int orbit_points = 0;
};

struct CensusConfig {
  InitDistribution init = InitDistribution::gaussian(1.0);
  /// grad_tol = 0 selects 1e-6 (1 + ||M*_Omega||_F); Newton finishes the job.
  GdConfig gd;
  /// Subspace is chosen from r; tolerances as given.
  NewtonOptions newton;
  double dedup_radius = 1e-4;
  /// 0 = hardware concurrency. Results do not depend on this value.
  int threads = 0;
};

struct CensusReport {
  std::vector<CriticalPointRecord> classes;
  std::int64_t n_starts = 0;
  double dedup_radius = 0.0;
  /// Starts that did not end at a critical point (GD diverged, Newton failed, ...).
  std::int64_t unresolved = 0;

  std::int64_t count_classes(Classification c) const;
  /// Point count for r = 1 (each sign orbit contributes its orbit_points).
  std::int64_t count_points(Classification c) const;
};

/// Each start: radial init, gradient descent, Newton refinement,
/// canonicalization and classification; classes are merged in start order
/// and sorted by objective.
CensusReport multistart_census(const McInstance& inst, const LossSpec& loss, std::int64_t n_starts,
                               std::uint64_t seed, const CensusConfig& cfg = {});

struct LowerBoundCheck {
  std::int64_t bound = 0;
  std::int64_t found = 0;
  bool satisfied = false;
  /// "points" or "orbits".
  std::string unit;
};

/// r = 1 with E2 empty: spurious points against 2^|S| - 2. Otherwise spurious
/// orbits against 2^{r(|S| - 1)} - 1.
LowerBoundCheck check_lower_bound(const CensusReport& report, const BlockSparsityGraph& g, int r,
                                  const std::optional<VertexSet>& s);

/// True when every class of `a` has a class of `b` within `radius` with the
/// same classification, and vice versa.
bool same_class_sets(const CensusReport& a, const CensusReport& b, double radius);

}  // namespace mcland

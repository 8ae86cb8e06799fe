#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mcland/graph.hpp"
#include "mcland/measurement.hpp"

namespace mcland {

/// Dense real n x r factor with finite entries.
class FactorMatrix {
 public:
  FactorMatrix() = default;
  explicit FactorMatrix(Eigen::MatrixXd data);
  static FactorMatrix zeros(int n, int r) { return FactorMatrix(Eigen::MatrixXd::Zero(n, r)); }

  int n() const { return static_cast<int>(data_.rows()); }
  int r() const { return static_cast<int>(data_.cols()); }
  const Eigen::MatrixXd& matrix() const { return data_; }
  double operator()(int i, int j) const { return data_(i, j); }

  /// r x r block i (rows i r .. i r + r - 1).
  Eigen::MatrixXd block(int i) const { return data_.middleRows(static_cast<Eigen::Index>(i) * r(), r()); }

  friend bool operator==(const FactorMatrix& a, const FactorMatrix& b) {
    return a.data_.rows() == b.data_.rows() && a.data_.cols() == b.data_.cols() &&
           a.data_ == b.data_;
  }

 private:
  Eigen::MatrixXd data_;
};

/// Observed upper-triangular entry (row <= col) of M*.
struct ObservedEntry {
  int row;
  int col;
  double value;
};

/// Matrix completion instance: find rank-r PSD M with M_Omega = M*_Omega.
/// M* is held through its factor and only materialized on request.
class McInstance {
 public:
  McInstance(FactorMatrix ground_truth, MeasurementSet omega,
             std::optional<BlockSparsityGraph> graph = std::nullopt);

  int n() const { return ground_truth_.n(); }
  int r() const { return ground_truth_.r(); }
  const FactorMatrix& ground_truth() const { return ground_truth_; }
  const MeasurementSet& omega() const { return omega_; }
  const std::optional<BlockSparsityGraph>& graph() const { return graph_; }

  /// M*_ij for i <= j over Omega, aligned with omega().upper_entries().
  const std::vector<ObservedEntry>& observed() const { return observed_; }
  /// ||M*_Omega||_F.
  double observed_norm() const { return observed_norm_; }
  double entry(int i, int j) const;
  Eigen::MatrixXd dense_ground_truth() const;

 private:
  FactorMatrix ground_truth_;
  MeasurementSet omega_;
  std::optional<BlockSparsityGraph> graph_;
  std::vector<ObservedEntry> observed_;
  double observed_norm_ = 0.0;
};

struct MembershipReport {
  bool psd_rank_r = false;
  bool all_blocks_full_rank = false;
  bool g1_connected_nonbipartite = false;
  bool in_class = false;
};

/// Block X*_i = I_r for i in S and 0 otherwise; requires n = m r.
FactorMatrix build_canonical_ground_truth(const BlockSparsityGraph& g, const VertexSet& s, int n,
                                          int r);

/// i.i.d. standard Gaussian factor; every block is full rank almost surely.
FactorMatrix build_random_ground_truth(int n, int r, std::uint64_t seed);

/// Gaussian direction with ||eps||_F = 1, the direction used by perturb().
Eigen::MatrixXd perturbation_direction(int n, int r, std::uint64_t seed);

/// X* + gamma eps with eps = perturbation_direction(n, r, seed).
FactorMatrix perturb(const FactorMatrix& x_star, double gamma, std::uint64_t seed);

McInstance assemble_instance(const FactorMatrix& x_star, const MeasurementSet& omega,
                             std::optional<BlockSparsityGraph> graph = std::nullopt);

/// Relative tolerance for the rank tests below, against sigma_max(M*).
inline constexpr double kRankTolerance = 1e-10;

MembershipReport check_class_membership(const McInstance& inst);

/// (n / r) max_i ||U_i||^2 for an orthonormal basis U of range(M*).
double compute_incoherence(const McInstance& inst);

}  // namespace mcland

#include "mcland/instance.hpp"

#include <algorithm>
#include <cmath>

#include "mcland/error.hpp"
#include "mcland/rng.hpp"

namespace mcland {

FactorMatrix::FactorMatrix(Eigen::MatrixXd data) : data_(std::move(data)) {
  if (!data_.allFinite()) throw Error(ErrorCode::InvalidParams, "factor has non-finite entries");
}

McInstance::McInstance(FactorMatrix ground_truth, MeasurementSet omega,
                       std::optional<BlockSparsityGraph> graph)
    : ground_truth_(std::move(ground_truth)), omega_(std::move(omega)), graph_(std::move(graph)) {
  if (omega_.n() != ground_truth_.n()) {
    throw Error(ErrorCode::DimensionMismatch, "Omega size does not match the factor's row count");
  }
  if (graph_ && graph_->m() != omega_.n() / ground_truth_.r()) {
    throw Error(ErrorCode::DimensionMismatch, "graph m does not equal floor(n / r)");
  }
  const Eigen::MatrixXd& x = ground_truth_.matrix();
  double sq = 0.0;
  for (const auto& [i, j] : omega_.upper_entries()) {
    const double v = x.row(i).dot(x.row(j));
    observed_.push_back({i, j, v});
    sq += (i == j ? 1.0 : 2.0) * v * v;
  }
  observed_norm_ = std::sqrt(sq);
}

double McInstance::entry(int i, int j) const {
  const Eigen::MatrixXd& x = ground_truth_.matrix();
  return x.row(i).dot(x.row(j));
}

Eigen::MatrixXd McInstance::dense_ground_truth() const {
  const Eigen::MatrixXd& x = ground_truth_.matrix();
  return x * x.transpose();
}

FactorMatrix build_canonical_ground_truth(const BlockSparsityGraph& g, const VertexSet& s, int n,
                                          int r) {
  if (r < 1 || n != g.m() * r) {
    throw Error(ErrorCode::DimensionMismatch, "canonical ground truth needs n = m r");
  }
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, r);
  for (Vertex v : s) {
    if (v < 0 || v >= g.m()) throw Error(ErrorCode::InvalidS, "S vertex outside [m]");
    x.middleRows(static_cast<Eigen::Index>(v) * r, r).setIdentity();
  }
  return FactorMatrix(std::move(x));
}

FactorMatrix build_random_ground_truth(int n, int r, std::uint64_t seed) {
  Rng rng(seed);
  return FactorMatrix(rng.gaussian_matrix(n, r));
}

Eigen::MatrixXd perturbation_direction(int n, int r, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd eps = rng.gaussian_matrix(n, r);
  return eps / eps.norm();
}

FactorMatrix perturb(const FactorMatrix& x_star, double gamma, std::uint64_t seed) {
  if (!(gamma >= 0.0)) throw Error(ErrorCode::InvalidParams, "gamma must be nonnegative");
  if (gamma == 0.0) return x_star;
  return FactorMatrix(x_star.matrix() + gamma * perturbation_direction(x_star.n(), x_star.r(), seed));
}

McInstance assemble_instance(const FactorMatrix& x_star, const MeasurementSet& omega,
                             std::optional<BlockSparsityGraph> graph) {
  if (omega.n() != x_star.n() || omega.r() != x_star.r()) {
    throw Error(ErrorCode::DimensionMismatch, "Omega (n, r) differs from the factor's shape");
  }
  return McInstance(x_star, omega, std::move(graph));
}

MembershipReport check_class_membership(const McInstance& inst) {
  if (!inst.graph()) throw Error(ErrorCode::MissingGraph, "instance has no block sparsity graph");
  const BlockSparsityGraph& g = *inst.graph();
  const int r = inst.r();
  const Eigen::MatrixXd& x = inst.ground_truth().matrix();

  MembershipReport report;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(x);
  const Eigen::VectorXd sv = svd.singularValues();
  const double sigma_max = sv.size() > 0 ? sv(0) * sv(0) : 0.0;
  report.psd_rank_r = sigma_max > 0.0 && sv(sv.size() - 1) * sv(sv.size() - 1) > kRankTolerance * sigma_max;

  report.all_blocks_full_rank = sigma_max > 0.0;
  for (int i = 0; i < g.m() && report.all_blocks_full_rank; ++i) {
    for (int j = 0; j < g.m() && report.all_blocks_full_rank; ++j) {
      const Eigen::MatrixXd block = x.middleRows(static_cast<Eigen::Index>(i) * r, r) *
                                    x.middleRows(static_cast<Eigen::Index>(j) * r, r).transpose();
      Eigen::JacobiSVD<Eigen::MatrixXd> bsvd(block);
      report.all_blocks_full_rank = bsvd.singularValues()(r - 1) > kRankTolerance * sigma_max;
    }
  }
  const GraphAnalysis analysis = analyze_graph(g);
  report.g1_connected_nonbipartite = analysis.connected && analysis.nonbipartite;
  report.in_class = report.psd_rank_r && report.all_blocks_full_rank && report.g1_connected_nonbipartite;
  return report;
}

double compute_incoherence(const McInstance& inst) {
  const Eigen::MatrixXd& x = inst.ground_truth().matrix();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU);
  const Eigen::VectorXd sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) throw Error(ErrorCode::ZeroMatrix, "ground truth is zero");
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > std::sqrt(kRankTolerance) * sv(0)) ++rank;
  const Eigen::MatrixXd u = svd.matrixU().leftCols(rank);
  const double max_row = u.rowwise().squaredNorm().maxCoeff();
  return static_cast<double>(inst.n()) / inst.r() * max_row;
}

}  // namespace mcland

#pragma once

#include <utility>
#include <vector>

#include "mcland/graph.hpp"

namespace mcland {

/// Symmetric set of observed entries of an n x n matrix.
class MeasurementSet {
 public:
  using Entry = std::pair<int, int>;

  /// Takes any entry list; the symmetric closure is stored sorted.
  MeasurementSet(int n, int r, const std::vector<Entry>& entries);

  int n() const { return n_; }
  int r() const { return r_; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }
  bool contains(int i, int j) const { return mask_[static_cast<std::size_t>(i) * n_ + j] != 0; }

  /// Entries with i <= j, sorted.
  std::vector<Entry> upper_entries() const;

  friend bool operator==(const MeasurementSet& a, const MeasurementSet& b) {
    return a.n_ == b.n_ && a.r_ == b.r_ && a.entries_ == b.entries_;
  }

 private:
  int n_;
  int r_;
  std::vector<Entry> entries_;
  std::vector<unsigned char> mask_;
};

/// Omega(G): full blocks for E1, off-diagonal block entries for E2, and the
/// trailing n - m r rows and columns fully observed.
MeasurementSet induce_measurement_set(const BlockSparsityGraph& g, int n, int r);

/// Recovers the block graph of an induced set: fully observed blocks go to
/// E1, blocks with exactly their off-diagonal entries observed go to E2.
BlockSparsityGraph infer_graph(const MeasurementSet& omega);

}  // namespace mcland

#include "mcland/measurement.hpp"

#include <algorithm>

#include "mcland/error.hpp"

namespace mcland {

MeasurementSet::MeasurementSet(int n, int r, const std::vector<Entry>& entries)
    : n_(n), r_(r), mask_(static_cast<std::size_t>(n) * n, 0) {
  if (n < 1 || r < 1) throw Error(ErrorCode::InvalidParams, "measurement set needs n, r >= 1");
  for (const auto& [i, j] : entries) {
    if (i < 0 || j < 0 || i >= n || j >= n) {
      throw Error(ErrorCode::DimensionMismatch, "observed entry outside [n] x [n]");
    }
    mask_[static_cast<std::size_t>(i) * n + j] = 1;
    mask_[static_cast<std::size_t>(j) * n + i] = 1;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (contains(i, j)) entries_.emplace_back(i, j);
    }
  }
}

std::vector<MeasurementSet::Entry> MeasurementSet::upper_entries() const {
  std::vector<Entry> out;
  for (const auto& [i, j] : entries_) {
    if (i <= j) out.emplace_back(i, j);
  }
  return out;
}

MeasurementSet induce_measurement_set(const BlockSparsityGraph& g, int n, int r) {
  if (r < 1 || n < 1 || n / r != g.m()) {
    throw Error(ErrorCode::DimensionMismatch, "floor(n / r) must equal the graph's m");
  }
  std::vector<MeasurementSet::Entry> entries;
  for (const auto& [a, b] : g.e1()) {
    for (int p = 0; p < r; ++p) {
      for (int q = 0; q < r; ++q) entries.emplace_back(a * r + p, b * r + q);
    }
  }
  for (const auto& [a, b] : g.e2()) {
    for (int p = 0; p < r; ++p) {
      for (int q = 0; q < r; ++q) {
        if (p != q) entries.emplace_back(a * r + p, b * r + q);
      }
    }
  }
  for (int i = g.m() * r; i < n; ++i) {
    for (int j = 0; j < n; ++j) entries.emplace_back(i, j);
  }
  return MeasurementSet(n, r, entries);
}

BlockSparsityGraph infer_graph(const MeasurementSet& omega) {
  const int n = omega.n();
  const int r = omega.r();
  const int m = n / r;
  for (int i = m * r; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!omega.contains(i, j)) {
        throw Error(ErrorCode::InvalidParams, "trailing rows of Omega are not fully observed");
      }
    }
  }
  std::vector<Edge> e1;
  std::vector<Edge> e2;
  for (int a = 0; a < m; ++a) {
    for (int b = a; b < m; ++b) {
      int diagonal = 0;
      int off_diagonal = 0;
      for (int p = 0; p < r; ++p) {
        for (int q = 0; q < r; ++q) {
          if (!omega.contains(a * r + p, b * r + q)) continue;
          (p == q ? diagonal : off_diagonal) += 1;
        }
      }
      if (diagonal + off_diagonal == r * r) {
        e1.emplace_back(a, b);
      } else if (diagonal == 0 && off_diagonal == r * r - r && off_diagonal > 0 && a != b) {
        e2.emplace_back(a, b);
      } else if (diagonal + off_diagonal != 0) {
        throw Error(ErrorCode::InvalidParams, "Omega is not induced by a block sparsity graph");
      }
    }
  }
  return BlockSparsityGraph(m, e1, e2);
}

}  // namespace mcland

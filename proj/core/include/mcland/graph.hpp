#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string_view>
#include <utility>
#include <vector>

namespace mcland {

/// Vertices are 0-based in the C++ API; files and the CLI use 1-based labels.
using Vertex = int;
/// Unordered vertex pair stored as (min, max).
using Edge = std::pair<Vertex, Vertex>;
/// Sorted, duplicate-free vertex list.
using VertexSet = std::vector<Vertex>;

inline Edge make_edge(Vertex a, Vertex b) { return a <= b ? Edge{a, b} : Edge{b, a}; }

VertexSet normalize_vertex_set(VertexSet s);

/// Block sparsity graph G = (V, E1, E2) over m block-vertices.
///
/// E1 edges observe whole r x r blocks, E2 edges observe only the off-diagonal
/// entries of a block. Self-loops are stored explicitly in E1 and are never
/// allowed in E2. The two edge sets are disjoint.
class BlockSparsityGraph {
 public:
  BlockSparsityGraph(int m, const std::vector<Edge>& e1, const std::vector<Edge>& e2);

  int m() const { return m_; }
  const std::set<Edge>& e1() const { return e1_; }
  const std::set<Edge>& e2() const { return e2_; }

  bool in_e1(Vertex a, Vertex b) const { return e1_.count(make_edge(a, b)) != 0; }
  bool in_e2(Vertex a, Vertex b) const { return e2_.count(make_edge(a, b)) != 0; }
  bool has_self_loop(Vertex v) const { return in_e1(v, v); }

  /// E1 neighbours of each vertex, self-loops excluded, ascending.
  std::vector<std::vector<Vertex>> e1_adjacency() const;

  friend bool operator==(const BlockSparsityGraph&, const BlockSparsityGraph&) = default;

 private:
  int m_;
  std::set<Edge> e1_;
  std::set<Edge> e2_;
};

enum class Pattern {
  Example1Path,
  Example2EvenCross,
  Star,
  SingleMissing,
  Cross,
  AugmentedCross,
  SingleMissingRankR,
};

Pattern parse_pattern(std::string_view name);
std::string_view to_string(Pattern pattern);

struct PatternParams {
  /// Vertex count: n for the rank-1 examples, m otherwise.
  int size = 0;
  /// Hub index (0-based) for cross / augmented_cross.
  int k = 0;
  /// Block size; only star consults it (E2 path over the leaves when r > 1).
  int r = 1;
};

BlockSparsityGraph build_named_pattern(Pattern pattern, const PatternParams& params);

/// G(m, p) on E1 followed by the repair rules: edges inside target_s are
/// dropped, every vertex of target_s gets a self-loop, every vertex outside
/// target_s is attached to target_s, and components are joined. E2 is a random
/// spanning tree on target_s. Deterministic in seed.
BlockSparsityGraph build_erdos_renyi(int m, double p, const VertexSet& target_s,
                                     std::uint64_t seed);

struct GraphAnalysis {
  bool connected = false;
  bool nonbipartite = false;
  std::optional<std::vector<Vertex>> odd_cycle;
  VertexSet max_independent_set;
  bool all_mis_have_self_loops = false;
};

GraphAnalysis analyze_graph(const BlockSparsityGraph& g);

/// Odd cycle in E1 as a closed vertex walk c0 -> c1 -> ... -> c_{2k} -> c0.
/// A self-loop is returned as a single vertex and is preferred when present.
std::optional<std::vector<Vertex>> find_odd_cycle(const BlockSparsityGraph& g);

bool is_connected(const BlockSparsityGraph& g);
bool is_independent(const BlockSparsityGraph& g, const VertexSet& s);
bool is_maximal_independent(const BlockSparsityGraph& g, const VertexSet& s);

/// Greedy maximal independent set: self-loop vertices first, ascending, then
/// the remaining vertices.
VertexSet greedy_maximal_independent_set(const BlockSparsityGraph& g);

}  // namespace mcland

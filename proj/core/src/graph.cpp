#include "mcland/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <string>

#include "mcland/error.hpp"
#include "mcland/rng.hpp"

namespace mcland {

VertexSet normalize_vertex_set(VertexSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

BlockSparsityGraph::BlockSparsityGraph(int m, const std::vector<Edge>& e1,
                                       const std::vector<Edge>& e2)
    : m_(m) {
  if (m < 1) throw Error(ErrorCode::InvalidParams, "graph needs m >= 1");
  auto in_range = [m](Vertex v) { return v >= 0 && v < m; };
  for (const auto& [a, b] : e1) {
    if (!in_range(a) || !in_range(b)) {
      throw Error(ErrorCode::InvalidParams, "E1 endpoint outside [m]");
    }
    e1_.insert(make_edge(a, b));
  }
  for (const auto& [a, b] : e2) {
    if (!in_range(a) || !in_range(b)) {
      throw Error(ErrorCode::InvalidParams, "E2 endpoint outside [m]");
    }
    if (a == b) throw Error(ErrorCode::InvalidParams, "E2 may not contain self-loops");
    const Edge e = make_edge(a, b);
    if (e1_.count(e) != 0) throw Error(ErrorCode::InvalidParams, "E1 and E2 must be disjoint");
    e2_.insert(e);
  }
}

std::vector<std::vector<Vertex>> BlockSparsityGraph::e1_adjacency() const {
  std::vector<std::vector<Vertex>> adj(static_cast<std::size_t>(m_));
  for (const auto& [a, b] : e1_) {
    if (a == b) continue;
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

namespace {

struct PatternName {
  Pattern pattern;
  std::string_view name;
};

constexpr PatternName kPatternNames[] = {
    {Pattern::Example1Path, "example1_path"},
    {Pattern::Example2EvenCross, "example2_even_cross"},
    {Pattern::Star, "star"},
    {Pattern::SingleMissing, "single_missing"},
    {Pattern::Cross, "cross"},
    {Pattern::AugmentedCross, "augmented_cross"},
    {Pattern::SingleMissingRankR, "single_missing_rank_r"},
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidParams, what);
}

std::vector<Edge> complete_with_loops_minus_01(int m) {
  std::vector<Edge> e1;
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      if (i == 0 && j == 1) continue;
      e1.emplace_back(i, j);
    }
  }
  return e1;
}

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }
  void unite(int a, int b) { parent_[find(a)] = find(b); }

 private:
  std::vector<int> parent_;
};

}  // namespace

Pattern parse_pattern(std::string_view name) {
  for (const auto& entry : kPatternNames) {
    if (entry.name == name) return entry.pattern;
  }
  throw Error(ErrorCode::UnknownPattern, "unknown pattern '" + std::string(name) + "'");
}

std::string_view to_string(Pattern pattern) {
  for (const auto& entry : kPatternNames) {
    if (entry.pattern == pattern) return entry.name;
  }
  return "unknown";
}

BlockSparsityGraph build_named_pattern(Pattern pattern, const PatternParams& params) {
  const int m = params.size;
  std::vector<Edge> e1;
  std::vector<Edge> e2;
  switch (pattern) {
    case Pattern::Example1Path:
      require(m >= 1, "example1_path needs n >= 1");
      for (int i = 0; i < m; ++i) {
        e1.emplace_back(i, i);
        if (i + 1 < m) e1.emplace_back(i, i + 1);
      }
      break;
    case Pattern::Example2EvenCross:
      require(m >= 1, "example2_even_cross needs n >= 1");
      // 1-based labels 2k are the odd 0-based indices.
      for (int i = 0; i < m; ++i) {
        e1.emplace_back(i, i);
        for (int j = 1; j < m; j += 2) e1.push_back(make_edge(i, j));
      }
      break;
    case Pattern::Star:
      require(m >= 2, "star needs m >= 2");
      require(params.r >= 1, "star needs r >= 1");
      for (int j = 1; j < m; ++j) {
        e1.emplace_back(0, j);
        e1.emplace_back(j, j);
      }
      if (params.r > 1) {
        for (int j = 1; j + 1 < m; ++j) e2.emplace_back(j, j + 1);
      }
      break;
    case Pattern::SingleMissing:
      require(m >= 2, "single_missing needs n >= 2");
      e1 = complete_with_loops_minus_01(m);
      break;
    case Pattern::SingleMissingRankR:
      require(m >= 2, "single_missing_rank_r needs m >= 2");
      e1 = complete_with_loops_minus_01(m);
      e2.emplace_back(0, 1);
      break;
    case Pattern::Cross:
    case Pattern::AugmentedCross: {
      require(m >= 1, "cross needs m >= 1");
      const int k = params.k;
      require(k >= 0 && k < m, "cross hub k must lie in [m]");
      for (int j = 0; j < m; ++j) e1.push_back(make_edge(k, j));
      if (pattern == Pattern::AugmentedCross) {
        for (int i = 0; i < m; ++i) e1.emplace_back(i, i);
        for (int i = 0; i < m; ++i) {
          for (int j = i + 1; j < m; ++j) {
            if (i != k && j != k) e2.emplace_back(i, j);
          }
        }
      }
      break;
    }
  }
  return BlockSparsityGraph(m, e1, e2);
}

BlockSparsityGraph build_erdos_renyi(int m, double p, const VertexSet& target_s,
                                     std::uint64_t seed) {
  require(m >= 1, "erdos_renyi needs m >= 1");
  require(p >= 0.0 && p <= 1.0, "erdos_renyi needs p in [0, 1]");
  const VertexSet s = normalize_vertex_set(target_s);
  if (s.empty()) throw Error(ErrorCode::EmptyS, "target S is empty");
  for (Vertex v : s) require(v >= 0 && v < m, "target S vertex outside [m]");
  if (static_cast<int>(s.size()) == m) {
    throw Error(ErrorCode::SNotRealizable, "S covers every vertex; no vertex left to connect through");
  }

  std::vector<char> in_s(static_cast<std::size_t>(m), 0);
  for (Vertex v : s) in_s[v] = 1;
  VertexSet complement;
  for (int v = 0; v < m; ++v) {
    if (!in_s[v]) complement.push_back(v);
  }

  Rng rng(seed);
  std::set<Edge> e1;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const bool drawn = rng.uniform01() < p;
      if (drawn && !(in_s[i] && in_s[j])) e1.emplace(i, j);
    }
  }
  for (Vertex v : s) e1.emplace(v, v);

  // Maximality of S: every outside vertex needs a neighbour in S.
  for (Vertex v : complement) {
    bool covered = false;
    for (Vertex u : s) covered = covered || e1.count(make_edge(u, v)) != 0;
    if (!covered) e1.insert(make_edge(v, s[rng.below(s.size())]));
  }

  DisjointSets sets(m);
  for (const auto& [a, b] : e1) sets.unite(a, b);
  auto members_of = [&](int root) {
    std::vector<Vertex> out;
    for (int v = 0; v < m; ++v) {
      if (sets.find(v) == root) out.push_back(v);
    }
    return out;
  };
  const Vertex anchor = complement.front();
  for (int v = 0; v < m; ++v) {
    if (sets.find(v) == sets.find(anchor)) continue;
    const std::vector<Vertex> comp = members_of(sets.find(v));
    std::vector<Vertex> comp_outside;
    for (Vertex u : comp) {
      if (!in_s[u]) comp_outside.push_back(u);
    }
    const std::vector<Vertex> anchor_comp = members_of(sets.find(anchor));
    Vertex from;
    Vertex to;
    if (!comp_outside.empty()) {
      from = comp_outside[rng.below(comp_outside.size())];
      to = anchor_comp[rng.below(anchor_comp.size())];
    } else {
      // A component without outside vertices is a lone S vertex.
      from = comp.front();
      std::vector<Vertex> anchor_outside;
      for (Vertex u : anchor_comp) {
        if (!in_s[u]) anchor_outside.push_back(u);
      }
      to = anchor_outside[rng.below(anchor_outside.size())];
    }
    e1.insert(make_edge(from, to));
    sets.unite(from, to);
  }

  std::vector<Edge> e2;
  std::vector<Vertex> order = s;
  rng.shuffle(order);
  for (std::size_t i = 1; i < order.size(); ++i) {
    e2.push_back(make_edge(order[i], order[rng.below(i)]));
  }
  return BlockSparsityGraph(m, std::vector<Edge>(e1.begin(), e1.end()), e2);
}

bool is_connected(const BlockSparsityGraph& g) {
  const auto adj = g.e1_adjacency();
  std::vector<char> seen(static_cast<std::size_t>(g.m()), 0);
  std::queue<Vertex> queue;
  queue.push(0);
  seen[0] = 1;
  int count = 1;
  while (!queue.empty()) {
    const Vertex v = queue.front();
    queue.pop();
    for (Vertex w : adj[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        queue.push(w);
      }
    }
  }
  return count == g.m();
}

std::optional<std::vector<Vertex>> find_odd_cycle(const BlockSparsityGraph& g) {
  for (int v = 0; v < g.m(); ++v) {
    if (g.has_self_loop(v)) return std::vector<Vertex>{v};
  }
  const auto adj = g.e1_adjacency();
  const int m = g.m();
  std::vector<int> depth(static_cast<std::size_t>(m), -1);
  std::vector<Vertex> parent(static_cast<std::size_t>(m), -1);
  for (int root = 0; root < m; ++root) {
    if (depth[root] >= 0) continue;
    depth[root] = 0;
    std::queue<Vertex> queue;
    queue.push(root);
    while (!queue.empty()) {
      const Vertex v = queue.front();
      queue.pop();
      for (Vertex w : adj[v]) {
        if (depth[w] < 0) {
          depth[w] = depth[v] + 1;
          parent[w] = v;
          queue.push(w);
        }
      }
    }
  }
  for (const auto& [a, b] : g.e1()) {
    if (a == b || (depth[a] - depth[b]) % 2 != 0) continue;
    // Walk both endpoints up to their lowest common ancestor.
    std::vector<Vertex> up_a{a};
    std::vector<Vertex> up_b{b};
    Vertex x = a;
    Vertex y = b;
    while (x != y) {
      if (depth[x] >= depth[y]) {
        x = parent[x];
        up_a.push_back(x);
      } else {
        y = parent[y];
        up_b.push_back(y);
      }
    }
    up_b.pop_back();  // the common ancestor is already the tail of up_a
    std::vector<Vertex> cycle(up_a.rbegin(), up_a.rend());
    cycle.insert(cycle.end(), up_b.begin(), up_b.end());
    return cycle;
  }
  return std::nullopt;
}

bool is_independent(const BlockSparsityGraph& g, const VertexSet& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      if (g.in_e1(s[i], s[j])) return false;
    }
  }
  return true;
}

bool is_maximal_independent(const BlockSparsityGraph& g, const VertexSet& s) {
  if (!is_independent(g, s)) return false;
  std::vector<char> in_s(static_cast<std::size_t>(g.m()), 0);
  for (Vertex v : s) in_s[v] = 1;
  for (int v = 0; v < g.m(); ++v) {
    if (in_s[v]) continue;
    bool blocked = false;
    for (Vertex u : s) blocked = blocked || g.in_e1(u, v);
    if (!blocked) return false;
  }
  return true;
}

VertexSet greedy_maximal_independent_set(const BlockSparsityGraph& g) {
  const auto adj = g.e1_adjacency();
  std::vector<char> taken(static_cast<std::size_t>(g.m()), 0);
  std::vector<char> blocked(static_cast<std::size_t>(g.m()), 0);
  auto take = [&](Vertex v) {
    taken[v] = 1;
    for (Vertex w : adj[v]) blocked[w] = 1;
  };
  for (int v = 0; v < g.m(); ++v) {
    if (g.has_self_loop(v) && !blocked[v]) take(v);
  }
  for (int v = 0; v < g.m(); ++v) {
    if (!taken[v] && !blocked[v]) take(v);
  }
  VertexSet out;
  for (int v = 0; v < g.m(); ++v) {
    if (taken[v]) out.push_back(v);
  }
  return out;
}

GraphAnalysis analyze_graph(const BlockSparsityGraph& g) {
  GraphAnalysis out;
  out.connected = is_connected(g);
  out.odd_cycle = find_odd_cycle(g);
  out.nonbipartite = out.odd_cycle.has_value();
  out.max_independent_set = greedy_maximal_independent_set(g);
  out.all_mis_have_self_loops = std::all_of(out.max_independent_set.begin(),
                                            out.max_independent_set.end(),
                                            [&](Vertex v) { return g.has_self_loop(v); });
  return out;
}

}  // namespace mcland

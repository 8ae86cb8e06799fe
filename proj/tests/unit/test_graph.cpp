#include <gtest/gtest.h>

#include <random>

#include <algorithm>
#include <queue>

#include "mcland/error.hpp"
#include "mcland/graph.hpp"
#include "mcland/measurement.hpp"

using namespace mcland;

namespace {

// Independent oracles: brute-force 2-colouring and subset enumeration.
bool bipartite_oracle(const BlockSparsityGraph& g) {
  for (const auto& [a, b] : g.e1()) {
    if (a == b) return false;
  }
  std::vector<int> colour(static_cast<std::size_t>(g.m()), -1);
  for (int s = 0; s < g.m(); ++s) {
    if (colour[s] != -1) continue;
    colour[s] = 0;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int w = 0; w < g.m(); ++w) {
        if (w == v || !g.in_e1(v, w)) continue;
        if (colour[w] == -1) {
          colour[w] = 1 - colour[v];
          q.push(w);
        } else if (colour[w] == colour[v]) {
          return false;
        }
      }
    }
  }
  return true;
}

bool independent_oracle(const BlockSparsityGraph& g, unsigned mask) {
  for (int a = 0; a < g.m(); ++a) {
    for (int b = a + 1; b < g.m(); ++b) {
      if ((mask >> a & 1u) && (mask >> b & 1u) && g.in_e1(a, b)) return false;
    }
  }
  return true;
}

std::vector<unsigned> maximal_independent_sets_oracle(const BlockSparsityGraph& g) {
  std::vector<unsigned> out;
  for (unsigned mask = 1; mask < (1u << g.m()); ++mask) {
    if (!independent_oracle(g, mask)) continue;
    bool maximal = true;
    for (int v = 0; v < g.m() && maximal; ++v) {
      if (!(mask >> v & 1u) && independent_oracle(g, mask | (1u << v))) maximal = false;
    }
    if (maximal) out.push_back(mask);
  }
  return out;
}

unsigned to_mask(const VertexSet& s) {
  unsigned mask = 0;
  for (Vertex v : s) mask |= 1u << v;
  return mask;
}

void expect_valid_odd_cycle(const BlockSparsityGraph& g, const std::vector<Vertex>& c) {
  ASSERT_FALSE(c.empty());
  EXPECT_EQ(c.size() % 2, 1u);
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_TRUE(g.in_e1(c[i], c[(i + 1) % c.size()])) << "missing edge at position " << i;
  }
}

}  // namespace

TEST(Graph, RejectsInvalidEdges) {
  EXPECT_THROW(BlockSparsityGraph(2, {{0, 2}}, {}), Error);
  EXPECT_THROW(BlockSparsityGraph(2, {}, {{1, 1}}), Error);
  EXPECT_THROW(BlockSparsityGraph(2, {{0, 1}}, {{1, 0}}), Error);
}

TEST(Graph, Example1PathN4) {
  const auto g = build_named_pattern(Pattern::Example1Path, {4});
  EXPECT_EQ(g.e1().size(), 7u);
  for (int i = 0; i < 4; ++i) EXPECT_TRUE(g.has_self_loop(i));
  for (int i = 0; i + 1 < 4; ++i) EXPECT_TRUE(g.in_e1(i, i + 1));
  EXPECT_TRUE(g.e2().empty());
}

TEST(Graph, CrossObservedBlocks) {
  const auto g = build_named_pattern(Pattern::Cross, {3, 1});
  std::set<std::pair<int, int>> blocks;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      if (g.in_e1(a, b)) blocks.insert({a, b});
    }
  }
  const std::set<std::pair<int, int>> expected{{1, 0}, {0, 1}, {1, 1}, {1, 2}, {2, 1}};
  EXPECT_EQ(blocks, expected);
}

TEST(Graph, PatternErrors) {
  EXPECT_THROW(parse_pattern("hexagon"), Error);
  try {
    build_named_pattern(Pattern::Cross, {3, 3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidParams);
  }
  for (Pattern p : {Pattern::Example1Path, Pattern::Example2EvenCross, Pattern::Star, Pattern::SingleMissing,
                    Pattern::Cross, Pattern::AugmentedCross, Pattern::SingleMissingRankR}) {
    EXPECT_EQ(parse_pattern(to_string(p)), p);
  }
}

TEST(Graph, StarHasLeafLoopsOnly) {
  const auto g = build_named_pattern(Pattern::Star, {4, 0, 1});
  EXPECT_FALSE(g.has_self_loop(0));
  for (int j = 1; j < 4; ++j) {
    EXPECT_TRUE(g.has_self_loop(j));
    EXPECT_TRUE(g.in_e1(0, j));
  }
  EXPECT_TRUE(g.e2().empty());
  const auto g2 = build_named_pattern(Pattern::Star, {4, 0, 2});
  EXPECT_EQ(g2.e2().size(), 2u);
}

TEST(Graph, AnalyzeExample1) {
  const auto g = build_named_pattern(Pattern::Example1Path, {4});
  const auto a = analyze_graph(g);
  EXPECT_TRUE(a.connected);
  EXPECT_TRUE(a.nonbipartite);
  ASSERT_TRUE(a.odd_cycle);
  EXPECT_EQ(a.odd_cycle->size(), 1u);
  EXPECT_EQ(a.max_independent_set, (VertexSet{0, 2}));
  EXPECT_TRUE(a.all_mis_have_self_loops);
  const auto all = maximal_independent_sets_oracle(g);
  EXPECT_NE(std::find(all.begin(), all.end(), to_mask(a.max_independent_set)), all.end());
}

TEST(Graph, EvenCycleIsBipartite) {
  const BlockSparsityGraph g(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}, {});
  const auto a = analyze_graph(g);
  EXPECT_TRUE(a.connected);
  EXPECT_FALSE(a.nonbipartite);
  EXPECT_FALSE(a.odd_cycle);
}

TEST(Graph, TriangleCycle) {
  const BlockSparsityGraph g(3, {{0, 1}, {1, 2}, {0, 2}}, {});
  const auto c = find_odd_cycle(g);
  ASSERT_TRUE(c);
  EXPECT_EQ(*c, (std::vector<Vertex>{0, 1, 2}));
}

TEST(Graph, OddCycleMatchesBipartiteOracleOnRandomGraphs) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int m = 2 + static_cast<int>(gen() % 7);
    std::vector<Edge> e1;
    for (int a = 0; a < m; ++a) {
      for (int b = a; b < m; ++b) {
        const double threshold = a == b ? 0.05 : 0.35;
        if (static_cast<double>(gen() % 1000) / 1000.0 < threshold) e1.push_back({a, b});
      }
    }
    const BlockSparsityGraph g(m, e1, {});
    const auto a = analyze_graph(g);
    EXPECT_EQ(a.nonbipartite, !bipartite_oracle(g));
    EXPECT_EQ(a.odd_cycle.has_value(), a.nonbipartite);
    if (a.odd_cycle) expect_valid_odd_cycle(g, *a.odd_cycle);
    EXPECT_TRUE(is_independent(g, a.max_independent_set));
    EXPECT_TRUE(is_maximal_independent(g, a.max_independent_set));
    const auto all = maximal_independent_sets_oracle(g);
    EXPECT_NE(std::find(all.begin(), all.end(), to_mask(a.max_independent_set)), all.end());
  }
}

TEST(Graph, NamedPatternsSatisfyConditions) {
  const std::vector<std::pair<Pattern, PatternParams>> cases{
      {Pattern::Example1Path, {6}},      {Pattern::Example1Path, {7}},      {Pattern::Example2EvenCross, {6}},
      {Pattern::Star, {4, 0, 2}},        {Pattern::SingleMissing, {5}},     {Pattern::SingleMissingRankR, {5}},
      {Pattern::AugmentedCross, {4, 0}},
  };
  for (const auto& [p, params] : cases) {
    const auto a = analyze_graph(build_named_pattern(p, params));
    EXPECT_TRUE(a.connected) << to_string(p);
    EXPECT_TRUE(a.nonbipartite) << to_string(p);
    EXPECT_TRUE(a.all_mis_have_self_loops) << to_string(p);
  }
}

TEST(ErdosRenyi, RepairFromEmpty) {
  VertexSet s;
  for (int v = 1; v < 10; ++v) s.push_back(v);
  const auto g = build_erdos_renyi(10, 0.0, s, 7);
  EXPECT_TRUE(is_connected(g));
  for (Vertex v : s) EXPECT_TRUE(g.has_self_loop(v));
  EXPECT_TRUE(is_independent(g, s));
  EXPECT_TRUE(is_maximal_independent(g, s));
}

TEST(ErdosRenyi, TwoVertices) {
  const auto g = build_erdos_renyi(2, 1.0, {1}, 0);
  EXPECT_TRUE(g.in_e1(0, 1));
  EXPECT_TRUE(g.has_self_loop(1));
  EXPECT_TRUE(g.e2().empty());
}

TEST(ErdosRenyi, Errors) {
  try {
    build_erdos_renyi(3, 0.3, {}, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyS);
  }
  try {
    build_erdos_renyi(3, 0.3, {0, 1, 2}, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SNotRealizable);
  }
}

TEST(ErdosRenyi, DeterministicAndInClassOver100Seeds) {
  const VertexSet s{0, 2, 4, 5};
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto g = build_erdos_renyi(10, 0.3, s, seed);
    EXPECT_EQ(g, build_erdos_renyi(10, 0.3, s, seed));
    const auto a = analyze_graph(g);
    EXPECT_TRUE(a.connected);
    EXPECT_TRUE(a.nonbipartite);
    EXPECT_TRUE(is_maximal_independent(g, s));
    for (Vertex v : s) EXPECT_TRUE(g.has_self_loop(v));
    // E2 is a spanning tree of S.
    EXPECT_EQ(g.e2().size(), s.size() - 1);
    std::vector<int> parent(10);
    for (int i = 0; i < 10; ++i) parent[i] = i;
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x];
      return x;
    };
    for (const auto& [a2, b2] : g.e2()) {
      EXPECT_TRUE(std::binary_search(s.begin(), s.end(), a2));
      EXPECT_TRUE(std::binary_search(s.begin(), s.end(), b2));
      parent[find(a2)] = find(b2);
    }
    for (Vertex v : s) EXPECT_EQ(find(v), find(s.front()));
  }
}

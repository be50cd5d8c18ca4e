#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "estgraph/community.hpp"
#include "estgraph/errors.hpp"
#include "estgraph/generators.hpp"
#include "estgraph/graph.hpp"
#include "estgraph/rng.hpp"
#include "estgraph/walkers.hpp"
#include "oracles.hpp"

using namespace estgraph;

namespace {

std::string canonical(const Graph& g) {
  std::ostringstream out;
  save_edgelist(out, g);
  return out.str();
}

// two K4 blocks joined by a single bridge edge 3-4; the optimal split is
// one block per K4 with Q = 11/26
Graph two_cliques_bridge() {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId i = 0; i < 4; ++i)
    for (NodeId j = i + 1; j < 4; ++j) edges.push_back({i, j});
  for (NodeId i = 4; i < 8; ++i)
    for (NodeId j = i + 1; j < 8; ++j) edges.push_back({i, j});
  edges.push_back({3, 4});
  return Graph::from_edges(8, edges);
}

Graph disjoint_triangles() {
  return Graph::from_edges(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
}

Partition make_partition(std::vector<uint32_t> assignment) {
  return normalize_partition(std::move(assignment));
}

Walk make_walk(std::vector<NodeId> positions) {
  Walk w;
  w.start = positions.at(0);
  for (NodeId u : positions) w.steps.push_back({u, 0});
  return w;
}

}  // namespace

TEST_CASE("walk_induced_subgraph: full coverage reproduces the graph") {
  Graph g = Graph::from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
  Walk w = make_walk({0, 1, 2, 3, 4, 0});
  Graph sub = walk_induced_subgraph(g, std::vector<Walk>{w});
  CHECK(sub.node_count() == g.node_count());
  CHECK(sub.edge_count() == g.edge_count());
  CHECK(canonical(sub) == canonical(g));
}

TEST_CASE("walk_induced_subgraph: partial coverage keeps only internal edges") {
  Graph tri = Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
  Walk w = make_walk({0, 1});
  Graph sub = walk_induced_subgraph(tri, std::vector<Walk>{w});
  CHECK(sub.node_count() == 2);
  CHECK(sub.edge_count() == 1);
}

TEST_CASE("walk_induced_subgraph: labels map back to the host graph") {
  Graph star = oracle::star_graph(5);
  Walk w = make_walk({0, 3, 0, 4});
  Graph sub = walk_induced_subgraph(star, std::vector<Walk>{w});
  CHECK(sub.node_count() == 3);
  CHECK(sub.edge_count() == 2);
  std::set<NodeId> labels;
  for (NodeId u = 0; u < sub.node_count(); ++u) labels.insert(sub.label(u));
  CHECK(labels == std::set<NodeId>{0, 3, 4});
}

TEST_CASE("walk_induced_subgraph: empty walk span throws") {
  Graph g = oracle::complete_graph(4);
  std::vector<Walk> none;
  CHECK_THROWS_AS(walk_induced_subgraph(g, none), EmptyWalkError);
}

TEST_CASE("walk_induced_subgraph: community-seeded walks induce exactly the visited structure") {
  GeneratorSpec spec;
  spec.family = Family::LFR;
  spec.size = 2000;
  spec.lfr_mu = 0.1;
  spec.lfr_communities = 8;
  spec.seed = 11;
  GeneratedGraph gen = generate(spec);
  const Graph& g = gen.graph;
  REQUIRE(gen.communities.has_value());
  Partition planted = normalize_partition(*gen.communities);

  // two 300-step walks from inside each planted community
  std::vector<std::vector<NodeId>> members(planted.community_count);
  for (NodeId u = 0; u < g.node_count(); ++u)
    members[planted.assignment[u]].push_back(u);
  LimitedGraphView view(g);
  std::vector<Walk> walks;
  for (uint32_t c = 0; c < planted.community_count; ++c) {
    REQUIRE(members[c].size() >= 2);
    walks.push_back(simple_random_walk(view, members[c].front(), 300, 0, mix_seed({40, c, 0})));
    walks.push_back(simple_random_walk(view, members[c].back(), 300, 0, mix_seed({40, c, 1})));
  }
  Graph sub = walk_induced_subgraph(g, walks);

  // node set is exactly the union of visited nodes, labels map back
  std::set<NodeId> visited;
  for (const Walk& w : walks)
    for (const auto& s : w.steps) visited.insert(s.first);
  REQUIRE(sub.node_count() == visited.size());
  std::map<NodeId, NodeId> to_sub;
  for (NodeId i = 0; i < sub.node_count(); ++i) {
    CHECK(visited.count((NodeId)sub.label(i)) == 1);
    to_sub[(NodeId)sub.label(i)] = i;
  }

  // every consecutive walk step is an edge of the subgraph, so each walk
  // is replayable inside it
  for (const Walk& w : walks)
    for (size_t i = 0; i + 1 < w.steps.size(); ++i)
      CHECK(sub.has_edge(to_sub.at(w.steps[i].first), to_sub.at(w.steps[i + 1].first)));

  // no edge appears that g does not have; every g edge between visited
  // nodes appears (checked on each visited node's full row)
  for (NodeId i = 0; i < sub.node_count(); ++i) {
    NodeId u = (NodeId)sub.label(i);
    std::set<NodeId> expect;
    for (NodeId v : g.neighbors(u))
      if (visited.count(v)) expect.insert(to_sub.at(v));
    std::set<NodeId> got(sub.neighbors(i).begin(), sub.neighbors(i).end());
    CHECK(got == expect);
  }
}

TEST_CASE("modularity: one block scores zero on any graph") {
  for (const Graph& g : {oracle::complete_graph(5), two_cliques_bridge(),
                         oracle::random_connected_graph(12, 0.3, 7)}) {
    Partition one = make_partition(std::vector<uint32_t>(g.node_count(), 0));
    CHECK(modularity(g, one) == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("modularity: two cliques with a bridge") {
  Graph g = two_cliques_bridge();
  Partition split = make_partition({0, 0, 0, 0, 1, 1, 1, 1});
  CHECK(modularity(g, split) == doctest::Approx(11.0 / 26.0).epsilon(1e-12));
  CHECK(modularity(g, split) ==
        doctest::Approx(oracle::partition_modularity(g, split.assignment)));
}

TEST_CASE("modularity: disjoint triangles split scores one half") {
  Graph g = disjoint_triangles();
  Partition split = make_partition({0, 0, 0, 1, 1, 1});
  CHECK(modularity(g, split) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("modularity: exhaustive search confirms the clique split is optimal") {
  Graph g = two_cliques_bridge();
  std::vector<uint32_t> best_assignment;
  double best_q = oracle::best_modularity(g, &best_assignment);
  CHECK(best_q == doctest::Approx(11.0 / 26.0).epsilon(1e-12));
  Partition norm = make_partition(best_assignment);
  CHECK(norm.community_count == 2);
  CHECK(norm.assignment == std::vector<uint32_t>{0, 0, 0, 0, 1, 1, 1, 1});
}

TEST_CASE("louvain: complete graph collapses to one community") {
  Partition p = louvain(oracle::complete_graph(5), 1);
  CHECK(p.community_count == 1);
}

TEST_CASE("louvain: recovers the two-clique split") {
  Graph g = two_cliques_bridge();
  Partition p = louvain(g, 3);
  CHECK(p.community_count == 2);
  CHECK(modularity(g, p) == doctest::Approx(11.0 / 26.0).epsilon(1e-12));
}

TEST_CASE("louvain: deterministic per seed") {
  Graph g = oracle::random_connected_graph(60, 0.1, 21);
  Partition a = louvain(g, 9);
  Partition b = louvain(g, 9);
  CHECK(a.community_count == b.community_count);
  CHECK(a.assignment == b.assignment);
}

TEST_CASE("louvain: recovers planted LFR communities at low mixing") {
  uint32_t hits = 0;
  for (uint64_t trial = 0; trial < 20; ++trial) {
    GeneratorSpec spec;
    spec.family = Family::LFR;
    spec.size = 1000;
    spec.lfr_mu = 0.05;
    spec.lfr_communities = 8;
    spec.seed = mix_seed({300, trial});
    GeneratedGraph gen = generate(spec);
    Partition p = louvain(gen.graph, mix_seed({301, trial}));
    if (p.community_count == 8) ++hits;
  }
  CHECK(hits >= 18);
}

TEST_CASE("greedy_modularity: disjoint triangles and bridged cliques") {
  Partition tri = greedy_modularity(disjoint_triangles());
  CHECK(tri.community_count == 2);
  Graph g = two_cliques_bridge();
  Partition p = greedy_modularity(g);
  CHECK(p.community_count == 2);
  CHECK(modularity(g, p) == doctest::Approx(11.0 / 26.0).epsilon(1e-12));
}

TEST_CASE("optimizers never end below zero modularity") {
  for (const Graph& g : {oracle::star_graph(8), oracle::path_graph(9),
                         oracle::random_connected_graph(30, 0.12, 5)}) {
    CHECK(modularity(g, louvain(g, 17)) >= -1e-12);
    CHECK(modularity(g, greedy_modularity(g)) >= -1e-12);
  }
}

// dense tiny random graphs are near-structureless (optima around 0.1), so
// greedy heuristics can legitimately stop a local step short; measured
// worst gap over these seeds is 0.03, gated at 0.05. The exhaustive
// optimum is also a hard ceiling no heuristic may exceed.
TEST_CASE("optimizers approach the exhaustive optimum on tiny graphs") {
  for (uint64_t trial = 0; trial < 10; ++trial) {
    uint32_t n = 6 + (uint32_t)(trial % 3);
    Graph g = oracle::random_connected_graph(n, 0.4, 100 + trial);
    double best_q = oracle::best_modularity(g);
    double lou = modularity(g, louvain(g, trial));
    double gre = modularity(g, greedy_modularity(g));
    CHECK(lou >= best_q - 0.05);
    CHECK(gre >= best_q - 0.05);
    CHECK(lou <= best_q + 1e-12);
    CHECK(gre <= best_q + 1e-12);
  }
}

TEST_CASE("label_propagation: disjoint triangles always separate") {
  Graph g = disjoint_triangles();
  for (uint64_t seed = 0; seed < 20; ++seed) {
    Partition p = label_propagation(g, seed);
    CHECK(p.community_count == 2);
    CHECK(p.assignment[0] == p.assignment[1]);
    CHECK(p.assignment[1] == p.assignment[2]);
    CHECK(p.assignment[3] == p.assignment[4]);
    CHECK(p.assignment[4] == p.assignment[5]);
    CHECK(p.assignment[0] != p.assignment[3]);
  }
}

TEST_CASE("label_propagation: complete graph collapses for every seed") {
  Graph g = oracle::complete_graph(5);
  for (uint64_t seed = 0; seed < 100; ++seed)
    CHECK(label_propagation(g, seed).community_count == 1);
}

TEST_CASE("label_propagation: output is a fixed point of the majority rule") {
  GeneratorSpec spec;
  spec.family = Family::LFR;
  spec.size = 500;
  spec.lfr_mu = 0.1;
  spec.lfr_communities = 6;
  spec.seed = 13;
  Graph g = generate(spec).graph;
  Partition p = label_propagation(g, 29);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    std::map<uint32_t, uint32_t> counts;
    uint32_t best = 0;
    for (NodeId v : g.neighbors(u)) best = std::max(best, ++counts[p.assignment[v]]);
    if (counts.empty()) continue;
    CHECK(counts[p.assignment[u]] == best);
  }
}

TEST_CASE("normalize_partition relabels in first-seen order") {
  Partition p = normalize_partition({7, 7, 2, 9, 2});
  CHECK(p.community_count == 3);
  CHECK(p.assignment == std::vector<uint32_t>{0, 0, 1, 2, 1});
}

TEST_CASE("partition json round trip") {
  Partition p = make_partition({0, 0, 1, 2, 1, 0});
  Partition q = partition_from_json(partition_to_json(p));
  CHECK(q.community_count == p.community_count);
  CHECK(q.assignment == p.assignment);
}

TEST_CASE("count_communities_of_size") {
  Partition p = make_partition({0, 0, 0, 1});
  CHECK(count_communities_of_size(p, 1) == 2);
  CHECK(count_communities_of_size(p, 2) == 1);
  CHECK(count_communities_of_size(p, 4) == 0);
}

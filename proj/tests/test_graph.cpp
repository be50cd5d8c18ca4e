#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "estgraph/errors.hpp"
#include "estgraph/graph.hpp"
#include "oracles.hpp"

using namespace estgraph;

static std::string canonical(const Graph& g) {
  std::ostringstream out;
  save_edgelist(out, g);
  return out.str();
}

TEST_CASE("build_graph basics") {
  std::vector<std::pair<uint64_t, uint64_t>> e{{0, 1}, {1, 2}};
  Graph g = build_graph(e);
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 2);
  CHECK(g.degree(1) == 2);
  g.validate();
}

TEST_CASE("build_graph dedups and symmetrizes") {
  std::vector<std::pair<uint64_t, uint64_t>> e{{0, 1}, {1, 0}, {0, 1}};
  Graph g = build_graph(e);
  CHECK(g.node_count() == 2);
  CHECK(g.edge_count() == 1);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(1, 0));
}

TEST_CASE("build_graph drops self-loops; empty result throws") {
  std::vector<std::pair<uint64_t, uint64_t>> only_loop{{0, 0}};
  CHECK_THROWS_AS(build_graph(only_loop), EmptyGraphError);

  std::vector<std::pair<uint64_t, uint64_t>> mixed{{0, 0}, {0, 1}};
  Graph g = build_graph(mixed);
  CHECK(g.node_count() == 2);
  CHECK(g.edge_count() == 1);
}

TEST_CASE("build_graph compacts sparse ids into labels") {
  std::vector<std::pair<uint64_t, uint64_t>> e{{100, 7}, {7, 2000}};
  Graph g = build_graph(e);
  CHECK(g.node_count() == 3);
  CHECK(g.label(0) == 7);
  CHECK(g.label(1) == 100);
  CHECK(g.label(2) == 2000);
  CHECK(g.degree(0) == 2);
}

TEST_CASE("load_edgelist parses comments and compacts ids") {
  std::istringstream in("# hdr\n0 1\n1 2\n");
  Graph g = load_edgelist(in);
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 2);

  std::istringstream in2("5 9\n");
  Graph g2 = load_edgelist(in2);
  CHECK(g2.node_count() == 2);
  CHECK(g2.label(0) == 5);
  CHECK(g2.label(1) == 9);
}

TEST_CASE("load_edgelist reports the malformed line") {
  std::istringstream in("0 1\nnot an edge\n");
  try {
    load_edgelist(in);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line_number == 2);
  }

  std::istringstream in3("# comment\n0 1\n");
  CHECK_THROWS_AS(load_edgelist(in3, false), ParseError);

  std::istringstream blank("0 1\n\n1 2\n");
  CHECK(load_edgelist(blank).edge_count() == 2);
}

TEST_CASE("save then load is the identity; save is a fixed point") {
  Graph g = oracle::random_connected_graph(40, 0.12, 99);
  std::string bytes = canonical(g);
  std::istringstream in(bytes);
  Graph back = load_edgelist(in);
  CHECK(back.node_count() == g.node_count());
  CHECK(back.edge_count() == g.edge_count());
  CHECK(canonical(back) == bytes);
}

TEST_CASE("canonical form is sorted with u < v") {
  std::vector<std::pair<uint64_t, uint64_t>> e{{3, 1}, {2, 0}, {1, 0}};
  std::string bytes = canonical(build_graph(e));
  CHECK(bytes == "0 1\n0 2\n1 3\n");
}

TEST_CASE("largest_connected_component") {
  // two disjoint triangles
  std::vector<std::pair<uint64_t, uint64_t>> tri2{{0, 1}, {1, 2}, {2, 0},
                                                  {3, 4}, {4, 5}, {5, 3}};
  Graph g = build_graph(tri2);
  Graph c = largest_connected_component(g);
  CHECK(c.node_count() == 3);
  CHECK(c.edge_count() == 3);

  // already connected: identical
  Graph p = oracle::path_graph(6);
  Graph cp = largest_connected_component(p);
  CHECK(cp.node_count() == 6);
  CHECK(canonical(cp) == canonical(p));

  // P5 plus an isolated edge
  std::vector<std::pair<uint64_t, uint64_t>> mix{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {10, 11}};
  Graph lcc = largest_connected_component(build_graph(mix));
  CHECK(lcc.node_count() == 5);
  CHECK(lcc.edge_count() == 4);
}

TEST_CASE("induced_subgraph keeps inside edges and composes labels") {
  Graph tri = oracle::complete_graph(3);
  std::vector<NodeId> keep{0, 1};
  Graph sub = induced_subgraph(tri, keep);
  CHECK(sub.node_count() == 2);
  CHECK(sub.edge_count() == 1);

  std::vector<std::pair<uint64_t, uint64_t>> e{{10, 20}, {20, 30}, {30, 10}};
  Graph labeled = build_graph(e);
  std::vector<NodeId> pick{1, 2};  // labels 20 and 30
  Graph s2 = induced_subgraph(labeled, pick);
  CHECK(s2.node_count() == 2);
  CHECK(s2.label(0) == 20);
  CHECK(s2.label(1) == 30);
}

TEST_CASE("degree-sum identity and validate on a random graph") {
  Graph g = oracle::random_connected_graph(60, 0.08, 4);
  uint64_t sum = 0;
  for (NodeId u = 0; u < g.node_count(); ++u) sum += g.degree(u);
  CHECK(sum == 2 * g.edge_count());
  CHECK(g.max_degree() >= 1);
  g.validate();
}

TEST_CASE("from_edges rejects out-of-range endpoints") {
  std::vector<std::pair<NodeId, NodeId>> e{{0, 5}};
  CHECK_THROWS_AS(Graph::from_edges(3, std::move(e)), Error);
}

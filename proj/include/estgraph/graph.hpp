#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace estgraph {

using NodeId = uint32_t;

// Undirected simple graph in CSR form with sorted neighbor lists.
// Nodes are dense internal ids 0..n-1. When a graph is built from an
// external edge list the original ids are kept as labels (empty labels
// mean identity). Every construction path validates the invariants:
// no self-loops, no parallel edges, symmetric adjacency.
class Graph {
 public:
  Graph() = default;

  uint32_t node_count() const { return n_; }
  uint64_t edge_count() const { return m_; }
  uint32_t degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }
  std::span<const NodeId> neighbors(NodeId u) const {
    return {adj_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
  }
  bool has_edge(NodeId u, NodeId v) const;
  uint64_t label(NodeId u) const { return labels_.empty() ? u : labels_[u]; }
  bool has_labels() const { return !labels_.empty(); }
  uint32_t max_degree() const;
  double avg_degree() const { return n_ ? 2.0 * (double)m_ / (double)n_ : 0.0; }

  // throws Error if any structural invariant is violated
  void validate() const;

  // Build from already-compact node ids in [0, n). Sorts, drops
  // self-loops and duplicates. The only way to make a Graph in-library.
  static Graph from_edges(uint32_t n, std::vector<std::pair<NodeId, NodeId>> edges,
                          std::vector<uint64_t> labels = {});

 private:
  uint32_t n_ = 0;
  uint64_t m_ = 0;
  std::vector<uint32_t> offsets_;
  std::vector<NodeId> adj_;
  std::vector<uint64_t> labels_;
};

// Build from arbitrary 64-bit ids: self-loops and duplicate edges are
// dropped, surviving endpoint ids are compacted to 0..n-1 in sorted
// order and kept as labels. Throws EmptyGraphError if nothing survives.
Graph build_graph(std::span<const std::pair<uint64_t, uint64_t>> edges);

// Whitespace-separated "u v" lines. Lines starting with '#' are skipped
// when skip_comments is set, otherwise they are a ParseError. Blank
// lines are ignored. Malformed lines throw ParseError with the line number.
Graph load_edgelist(std::istream& in, bool skip_comments = true);
Graph load_edgelist_file(const std::string& path, bool skip_comments = true);

// Canonical form: one "u v" per line (original labels), u < v, lines
// sorted numerically, '\n' endings. load(save(g)) reproduces g and
// save is a fixed point, so files can be compared byte-for-byte.
void save_edgelist(std::ostream& out, const Graph& g);
void save_edgelist_file(const std::string& path, const Graph& g);

Graph largest_connected_component(const Graph& g);

// Subgraph on the given nodes (duplicates ignored), keeping edges with
// both endpoints inside. Labels compose so original ids survive.
Graph induced_subgraph(const Graph& g, std::span<const NodeId> nodes);

}  // namespace estgraph

#include "estgraph/access.hpp"

#include "estgraph/errors.hpp"

namespace estgraph {

LimitedGraphView::LimitedGraphView(const Graph& g, uint64_t budget,
                                   bool free_neighbor_degrees)
    : g_(g),
      budget_(budget),
      free_neighbor_degrees_(free_neighbor_degrees),
      degree_known_(g.node_count(), false),
      neighbors_known_(g.node_count(), false) {}

void LimitedGraphView::charge(uint64_t cost) {
  if (budget_ != kUnlimited && cost > budget_ - spent_)
    throw BudgetExhaustedError("query needs " + std::to_string(cost) + ", " +
                               std::to_string(budget_ - spent_) + " left");
  spent_ += cost;
}

uint32_t LimitedGraphView::query_degree(NodeId u) {
  if (!degree_known_[u]) {
    charge(1);
    degree_known_[u] = true;
  }
  return g_.degree(u);
}

std::span<const NodeId> LimitedGraphView::query_neighbors(NodeId u) {
  if (!neighbors_known_[u]) {
    charge(g_.degree(u));
    neighbors_known_[u] = true;
    degree_known_[u] = true;  // the list length gives it away
    if (free_neighbor_degrees_)
      for (NodeId v : g_.neighbors(u)) degree_known_[v] = true;
  }
  return g_.neighbors(u);
}

NodeId LimitedGraphView::sample_random_neighbor(NodeId u, Rng& rng) {
  uint32_t d = g_.degree(u);
  if (d == 0) throw IsolatedNodeError("node " + std::to_string(u) + " has no neighbors");
  charge(1);
  NodeId v = g_.neighbors(u)[rng.below(d)];
  if (free_neighbor_degrees_) degree_known_[v] = true;
  return v;
}

}  // namespace estgraph

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "estgraph/graph.hpp"
#include "estgraph/rng.hpp"

namespace estgraph {

// Metered window onto a graph for partial-access experiments. Costs:
//   query_degree          1 on the first request per node, cached after
//   query_neighbors       d(u) on the first request per node (also
//                         reveals the degree), cached after
//   sample_random_neighbor  1 per call, every call
// An operation that would overrun the budget throws BudgetExhaustedError
// before spending or revealing anything. With free_neighbor_degrees set,
// degrees of nodes returned by query_neighbors / sample_random_neighbor
// stop costing anything (they arrive with the response).
class LimitedGraphView {
 public:
  static constexpr uint64_t kUnlimited = UINT64_MAX;

  explicit LimitedGraphView(const Graph& g, uint64_t budget = kUnlimited,
                            bool free_neighbor_degrees = false);

  uint32_t query_degree(NodeId u);
  std::span<const NodeId> query_neighbors(NodeId u);
  NodeId sample_random_neighbor(NodeId u, Rng& rng);

  uint64_t budget() const { return budget_; }
  uint64_t spent() const { return spent_; }
  uint64_t remaining() const { return budget_ == kUnlimited ? kUnlimited : budget_ - spent_; }

 private:
  void charge(uint64_t cost);
  void mark_degree_known(NodeId u) { degree_known_[u] = true; }

  const Graph& g_;
  uint64_t budget_;
  uint64_t spent_ = 0;
  bool free_neighbor_degrees_;
  std::vector<bool> degree_known_;
  std::vector<bool> neighbors_known_;
};

}  // namespace estgraph

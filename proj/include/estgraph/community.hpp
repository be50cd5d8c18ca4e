#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "estgraph/graph.hpp"
#include "estgraph/walkers.hpp"

namespace estgraph {

// induced subgraph on the union of all visited nodes, keeping every edge
// of g between them; node labels map back to g's labels
Graph walk_induced_subgraph(const Graph& g, std::span<const Walk> walks);

// node -> community id; ids are contiguous 0..community_count-1 in
// first-seen order over node ids
struct Partition {
  uint32_t community_count = 0;
  std::vector<uint32_t> assignment;
};

Partition normalize_partition(std::vector<uint32_t> raw);
std::string partition_to_json(const Partition& p);
Partition partition_from_json(const std::string& text);

// Newman modularity at resolution 1
double modularity(const Graph& g, const Partition& p);

// multilevel greedy modularity optimization; deterministic per seed.
// If the search somehow ends below Q = 0 the nodes are collapsed into a
// single community (Q = 0), so the result never loses to "no structure".
Partition louvain(const Graph& g, uint64_t seed);

// agglomerative best-merge-first (CNM); merges while the best merge has
// strictly positive modularity gain, ties broken on lowest community ids
Partition greedy_modularity(const Graph& g);

// asynchronous majority-label sweeps in seeded random order; a node keeps
// its label when it is among the neighborhood majorities, otherwise adopts
// one of them uniformly at random. Stops at a fixed point or after
// max_sweeps, whichever comes first.
Partition label_propagation(const Graph& g, uint64_t seed, uint32_t max_sweeps = 100);

// communities with at least min_size members
uint32_t count_communities_of_size(const Partition& p, uint32_t min_size);

}  // namespace estgraph

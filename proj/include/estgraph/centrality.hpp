#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "estgraph/graph.hpp"
#include "estgraph/promptgen.hpp"
#include "estgraph/walkers.hpp"

namespace estgraph {

// Betweenness over unordered pairs, endpoints excluded, unnormalized.
// The default entry point parallelizes over sources with OpenMP and merges
// per-thread partials in thread order, so results are reproducible for a
// fixed thread count; the serial twin is kept as a reference for tests
// and benchmarking.
std::vector<double> betweenness(const Graph& g);
std::vector<double> betweenness_serial(const Graph& g);

// Wasserman-Faust closeness: ((r-1)/(n-1)) * ((r-1)/sum_dist) computed
// within each node's reachable set; nodes reaching nothing score 0
std::vector<double> closeness(const Graph& g);
std::vector<double> closeness_serial(const Graph& g);

// power iteration with uniform teleport; dangling mass redistributed
// uniformly. Stops when the L1 change drops to tol, throws
// NonConvergenceError after max_iter sweeps.
std::vector<double> pagerank(const Graph& g, double damping = 0.85, double tol = 1e-9,
                             uint32_t max_iter = 10000);

// nodes ordered best-first with their scores aligned to the ordering
struct RankedNodes {
  std::vector<NodeId> ordering;
  std::vector<double> scores;
};

std::string ranked_to_json(const RankedNodes& r);
RankedNodes ranked_from_json(const std::string& text);

// descending score, ascending node id on ties
RankedNodes rank_by_score(std::span<const double> scores);

// ranking by visit counts over the retained positions of the walks;
// nodes from all walks are pooled (the union), ties broken on node id
RankedNodes visit_frequency_ranking(std::span<const Walk> walks);

// |top-k(truth) ∩ top-k(predicted)| / k (k clamped to the truth size)
double precision_at_k(const RankedNodes& truth, const RankedNodes& predicted, uint32_t k);

// Guess which generator family produced the walked graph from walk-visible
// evidence alone: degree spread separates lattices from random graphs,
// degree skew separates preferential attachment, and revisit clustering
// separates planted communities from uniform randomness.
StructureLabel classify_structure(std::span<const WalkStats> walks);

}  // namespace estgraph

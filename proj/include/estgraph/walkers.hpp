#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "estgraph/access.hpp"

namespace estgraph {

// A recorded walk. `steps` holds the retained positions as (node, degree)
// pairs: `length` transitions = length+1 entries. The first burn_in_dropped
// positions of the raw trajectory were discarded; `start` is where the
// walk was launched (position 0 of the raw trajectory), which equals
// steps[0].first only when burn_in_dropped == 0. All walkers are pure
// functions of (graph view, start, length, seed).
struct Walk {
  NodeId start = 0;
  uint64_t seed = 0;
  uint64_t burn_in_dropped = 0;
  std::vector<std::pair<NodeId, uint32_t>> steps;
};

std::string walk_to_json(const Walk& w);
Walk walk_from_json(const std::string& text);

// uniform proposal among neighbors, always moves
Walk simple_random_walk(LimitedGraphView& view, NodeId start, uint64_t length,
                        uint64_t burn_in, uint64_t seed);

// uniform proposal accepted with min(1, d(u)/d(v)); rejected proposals
// stay put, so the stationary law is uniform over nodes
Walk metropolis_hastings_walk(LimitedGraphView& view, NodeId start, uint64_t length,
                              uint64_t burn_in, uint64_t seed);

// moves to each neighbor with probability 1/d_max, stays with the rest;
// throws DMaxTooSmallError when a degree above d_max is encountered
Walk max_degree_walk(LimitedGraphView& view, NodeId start, uint64_t length,
                     uint64_t burn_in, uint32_t d_max, uint64_t seed);

// edge weights w(u,v) = 1/d(u) + 1/d(v); stationary law proportional to
// w(u) = sum of incident weights
Walk weighted_walk(LimitedGraphView& view, NodeId start, uint64_t length,
                   uint64_t burn_in, uint64_t seed);

// the weighted walk run until it has come back to `start` k times
struct ReturnRecord {
  NodeId start = 0;
  uint32_t k = 0;
  std::vector<uint64_t> return_times;  // absolute step indices, increasing; Z(k) = back()
  double w_start = 0;                  // sum of incident edge weights at start
  double degree_sum = 0;               // over every visited position, repeats included
  uint64_t positions = 0;
};

// throws NonReturningError when the walk exceeds the step cap
// (200 * k * unique-nodes-seen, or max_steps when nonzero)
ReturnRecord weighted_return_walk(LimitedGraphView& view, NodeId start, uint32_t k,
                                  uint64_t seed, uint64_t max_steps = 0);

// `count` independent uniform draws from [0, n), with replacement
std::vector<NodeId> uniform_node_sample(uint32_t n, uint64_t count, uint64_t seed);

}  // namespace estgraph

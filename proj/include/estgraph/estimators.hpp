#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "estgraph/access.hpp"
#include "estgraph/walkers.hpp"

namespace estgraph {

enum class SizeMethod { Uniform, Srw, Mh, MaxDegree, ReturnWalk };

const char* size_method_name(SizeMethod m);
SizeMethod size_method_from_name(std::string_view name);

// a sample of nodes in draw order, repeats allowed
struct SampleSet {
  std::vector<NodeId> draws;
};

struct ChapmanResult {
  double n_hat = 0;
  uint64_t s1_distinct = 0, s2_distinct = 0, collisions = 0;
};

// (|S1|+1)(|S2|+1)/|C| - 1 with |S1|, |S2|, |C| counted over distinct
// nodes, so repeated visits in a walk sample do not inflate the estimate.
// Throws EmptySampleError when either sample is empty and
// CollisionFreeError when the samples share no node.
ChapmanResult chapman_estimate(const SampleSet& s1, const SampleSet& s2);

// m_hat = d_avg * n_hat / 2
double edge_estimate(double n_hat, double d_avg);

// n_hat = Z(k) * w(start) / (2k), Z(k) = step index of the kth return
double return_time_estimate(const ReturnRecord& rec);

struct EstimateParams {
  double budget_fraction = 0.20;   // each sample draws round(fraction * n) nodes
  double burn_in_fraction = 0.10;  // walk burn-in, in nodes of the graph
  uint32_t k_returns = 10;         // return-walk method
  uint32_t d_max = 0;              // 0 = take the true max degree
  uint64_t seed = 0;
  void validate() const;  // throws SpecError
};

struct SizeEstimate {
  SizeMethod method = SizeMethod::Uniform;
  double n_hat = 0;
  double m_hat = 0;
  double d_avg = 0;  // raw mean degree over sample draws
  uint64_t budget_spent = 0;
  // diagnostics
  uint64_t s1_size = 0, s2_size = 0;  // draw counts
  uint64_t s1_distinct = 0, s2_distinct = 0, collisions = 0;
  std::vector<uint64_t> return_times;  // return-walk method only
};

std::string size_estimate_to_json(const SizeEstimate& e);

// Runs the full pipeline for one method against a budgeted view.
// `n` is the size of the node universe (experiment design input: sample
// sizing, uniform draws and walk starts). Capture-recapture methods draw
// two independent samples; the return-walk method runs one walk to its
// k-th return. Walk samples are the retained positions, repeats included;
// degrees observed along the way feed the edge estimate.
SizeEstimate estimate_size(LimitedGraphView& view, uint32_t n, SizeMethod method,
                           const EstimateParams& params);

// convenience: unmetered view over a whole graph, d_max derived
SizeEstimate estimate_size(const Graph& g, SizeMethod method, const EstimateParams& params);

}  // namespace estgraph

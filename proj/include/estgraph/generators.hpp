#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "estgraph/graph.hpp"

namespace estgraph {

enum class Family { BA, ER, GRP, LFR, GridHex, GridTri, Hypercube };

const char* family_name(Family f);
Family family_from_name(std::string_view name);

struct GeneratorSpec {
  Family family = Family::ER;
  uint32_t size = 0;  // requested node count; grids may round, see below
  uint64_t seed = 0;

  // BA: start from a star on ba_m+1 nodes, every later node attaches to
  // ba_m distinct existing nodes with probability proportional to degree
  uint32_t ba_m = 3;

  // ER: G(n, p) with p chosen so the expected edge count is
  // er_edge_multiplier * size
  double er_edge_multiplier = 5.0;

  // GRP: contiguous blocks with gaussian sizes (mean, variance), edge
  // probability grp_p_in inside a block and grp_p_out across blocks
  double grp_mean_block = 0.0;  // required
  double grp_variance = 0.0;
  double grp_p_in = 0.25;
  double grp_p_out = 0.01;

  // LFR-style planted partition: power-law degrees (exponent lfr_tau1,
  // capped at lfr_max_degree, lower bound fitted to hit lfr_avg_degree),
  // community count lfr_communities with power-law sizes (exponent
  // lfr_tau2), fraction lfr_mu of each node's edges leaving its community
  double lfr_mu = 0.1;
  double lfr_tau1 = 2.0;
  double lfr_tau2 = 1.0;
  double lfr_avg_degree = 20.0;
  uint32_t lfr_max_degree = 50;
  uint32_t lfr_communities = 0;  // 0 = pick from size

  // grids: explicit shape; 0 = derive a near-square / matching power
  // of two from size
  uint32_t grid_rows = 0, grid_cols = 0;
  uint32_t hypercube_dim = 0;

  void validate() const;  // throws SpecError
};

struct GeneratedGraph {
  Graph graph;
  // ground-truth community assignment, present for GRP and LFR
  std::optional<std::vector<uint32_t>> communities;
};

GeneratedGraph generate(const GeneratorSpec& spec);

}  // namespace estgraph

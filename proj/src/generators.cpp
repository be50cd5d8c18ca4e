#include "estgraph/generators.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <unordered_set>

#include "estgraph/errors.hpp"
#include "estgraph/rng.hpp"

namespace estgraph {

const char* family_name(Family f) {
  switch (f) {
    case Family::BA: return "ba";
    case Family::ER: return "er";
    case Family::GRP: return "grp";
    case Family::LFR: return "lfr";
    case Family::GridHex: return "grid_hex";
    case Family::GridTri: return "grid_tri";
    case Family::Hypercube: return "hypercube";
  }
  return "?";
}

Family family_from_name(std::string_view name) {
  if (name == "ba") return Family::BA;
  if (name == "er") return Family::ER;
  if (name == "grp") return Family::GRP;
  if (name == "lfr") return Family::LFR;
  if (name == "grid_hex") return Family::GridHex;
  if (name == "grid_tri") return Family::GridTri;
  if (name == "hypercube") return Family::Hypercube;
  throw SpecError("unknown graph family: " + std::string(name));
}

void GeneratorSpec::validate() const {
  switch (family) {
    case Family::BA:
      if (ba_m < 1) throw SpecError("ba_m must be >= 1");
      if (size < ba_m + 2) throw SpecError("BA needs size >= ba_m + 2");
      break;
    case Family::ER: {
      if (size < 2) throw SpecError("ER needs size >= 2");
      if (er_edge_multiplier <= 0) throw SpecError("er_edge_multiplier must be > 0");
      double max_edges = 0.5 * (double)size * ((double)size - 1);
      if (er_edge_multiplier * size > max_edges)
        throw SpecError("ER edge target exceeds complete graph");
      break;
    }
    case Family::GRP:
      if (size < 2) throw SpecError("GRP needs size >= 2");
      if (grp_mean_block <= 0 || grp_mean_block > size)
        throw SpecError("grp_mean_block must be in (0, size]");
      if (grp_variance < 0) throw SpecError("grp_variance must be >= 0");
      if (grp_p_in < 0 || grp_p_in > 1 || grp_p_out < 0 || grp_p_out > 1)
        throw SpecError("GRP probabilities must be in [0, 1]");
      break;
    case Family::LFR:
      if (size < 16) throw SpecError("LFR needs size >= 16");
      if (lfr_mu < 0 || lfr_mu >= 1) throw SpecError("lfr_mu must be in [0, 1)");
      if (lfr_tau1 <= 1 || lfr_tau2 <= 0) throw SpecError("bad LFR exponents");
      if (lfr_avg_degree < 2) throw SpecError("lfr_avg_degree must be >= 2");
      if ((double)lfr_max_degree < lfr_avg_degree)
        throw SpecError("lfr_max_degree below lfr_avg_degree");
      if (lfr_communities > size / 4) throw SpecError("too many LFR communities");
      break;
    case Family::GridHex:
    case Family::GridTri:
      if (grid_rows || grid_cols) {
        if (grid_rows < 2 || grid_cols < 2) throw SpecError("grid needs rows, cols >= 2");
      } else if (size < 4) {
        throw SpecError("grid needs size >= 4");
      }
      break;
    case Family::Hypercube:
      if (!hypercube_dim && size < 2) throw SpecError("hypercube needs size >= 2");
      break;
  }
}

namespace {

using EdgeVec = std::vector<std::pair<NodeId, NodeId>>;

GeneratedGraph make(uint32_t n, EdgeVec edges,
                    std::optional<std::vector<uint32_t>> comms = std::nullopt) {
  GeneratedGraph out;
  out.graph = Graph::from_edges(n, std::move(edges));
  out.communities = std::move(comms);
  return out;
}

GeneratedGraph gen_ba(const GeneratorSpec& s) {
  uint32_t n = s.size, m = s.ba_m;
  Rng rng(mix_seed({s.seed, 0x6261ULL}));
  EdgeVec edges;
  edges.reserve((size_t)m * (n - m));
  std::vector<NodeId> repeated;  // one entry per edge endpoint, degree-proportional pool
  repeated.reserve(edges.capacity() * 2);
  for (NodeId i = 1; i <= m; ++i) {  // star seed
    edges.emplace_back(0, i);
    repeated.push_back(0);
    repeated.push_back(i);
  }
  std::vector<NodeId> chosen;
  for (NodeId v = m + 1; v < n; ++v) {
    chosen.clear();
    while (chosen.size() < m) {
      NodeId t = repeated[rng.below(repeated.size())];
      if (std::find(chosen.begin(), chosen.end(), t) == chosen.end())
        chosen.push_back(t);
    }
    for (NodeId t : chosen) {
      edges.emplace_back(t, v);
      repeated.push_back(t);
      repeated.push_back(v);
    }
  }
  return make(n, std::move(edges));
}

// sparse G(n, p) over the upper triangle via geometric index skipping
void sample_pairs(Rng& rng, double p, uint64_t total, auto&& emit) {
  if (p <= 0) return;
  uint64_t idx = rng.skip(p);
  while (idx < total) {
    emit(idx);
    uint64_t g = rng.skip(p);
    if (g >= total - idx - 1) break;  // also covers the UINT64_MAX sentinel
    idx += 1 + g;
  }
}

GeneratedGraph gen_er(const GeneratorSpec& s) {
  uint64_t n = s.size;
  double p = std::min(1.0, 2.0 * s.er_edge_multiplier / ((double)n - 1));
  Rng rng(mix_seed({s.seed, 0x6572ULL}));
  uint64_t total = n * (n - 1) / 2;
  EdgeVec edges;
  edges.reserve((size_t)(s.er_edge_multiplier * (double)n * 1.1) + 16);
  uint32_t u = 0;
  uint64_t base = 0, row = n - 1;  // row u covers indices [base, base+row)
  sample_pairs(rng, p, total, [&](uint64_t idx) {
    while (idx >= base + row) {
      base += row;
      --row;
      ++u;
    }
    edges.emplace_back(u, (NodeId)(u + 1 + (idx - base)));
  });
  return make(s.size, std::move(edges));
}

GeneratedGraph gen_grp(const GeneratorSpec& s) {
  uint32_t n = s.size;
  Rng rng(mix_seed({s.seed, 0x677270ULL}));
  double sd = std::sqrt(s.grp_variance);
  std::vector<uint32_t> sizes;
  uint32_t total = 0;
  while (total < n) {
    auto b = (int64_t)std::llround(rng.gaussian(s.grp_mean_block, sd));
    uint32_t sz = (uint32_t)std::clamp<int64_t>(b, 1, n - total);
    sizes.push_back(sz);
    total += sz;
  }
  std::vector<uint32_t> start(sizes.size() + 1, 0);
  for (size_t i = 0; i < sizes.size(); ++i) start[i + 1] = start[i] + sizes[i];
  std::vector<uint32_t> comm(n);
  for (size_t b = 0; b < sizes.size(); ++b)
    for (uint32_t u = start[b]; u < start[b + 1]; ++u) comm[u] = (uint32_t)b;

  EdgeVec edges;
  for (size_t b = 0; b < sizes.size(); ++b) {  // within blocks
    uint64_t sz = sizes[b], base = start[b];
    if (sz < 2) continue;
    uint64_t total_pairs = sz * (sz - 1) / 2;
    uint32_t u = 0;
    uint64_t rbase = 0, row = sz - 1;
    sample_pairs(rng, s.grp_p_in, total_pairs, [&](uint64_t idx) {
      while (idx >= rbase + row) {
        rbase += row;
        --row;
        ++u;
      }
      edges.emplace_back((NodeId)(base + u), (NodeId)(base + u + 1 + (idx - rbase)));
    });
  }
  for (size_t a = 0; a < sizes.size(); ++a)  // across blocks
    for (size_t b = a + 1; b < sizes.size(); ++b) {
      uint64_t rect = (uint64_t)sizes[a] * sizes[b];
      sample_pairs(rng, s.grp_p_out, rect, [&](uint64_t idx) {
        edges.emplace_back((NodeId)(start[a] + idx / sizes[b]),
                           (NodeId)(start[b] + idx % sizes[b]));
      });
    }
  return make(n, std::move(edges), std::move(comm));
}

// --- LFR-style planted partition ---------------------------------------

// discrete power law p(d) ~ d^-tau on [lo, hi]
struct PowerLawTable {
  uint32_t lo;
  std::vector<double> cdf;
  PowerLawTable(uint32_t lo_, uint32_t hi, double tau) : lo(lo_) {
    double acc = 0;
    for (uint32_t d = lo_; d <= hi; ++d) {
      acc += std::pow((double)d, -tau);
      cdf.push_back(acc);
    }
    for (double& c : cdf) c /= acc;
  }
  uint32_t sample(Rng& rng) const {
    double u = rng.unit();
    auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    return lo + (uint32_t)(it - cdf.begin());
  }
  double mean() const {
    double m = 0, prev = 0;
    for (size_t i = 0; i < cdf.size(); ++i) {
      m += (double)(lo + i) * (cdf[i] - prev);
      prev = cdf[i];
    }
    return m;
  }
};

// smallest lower bound whose truncated power law mean reaches the target
uint32_t fit_power_law_min(double target_mean, uint32_t hi, double tau) {
  uint32_t best = 1;
  double best_gap = 1e300;
  for (uint32_t lo = 1; lo <= hi; ++lo) {
    double gap = std::fabs(PowerLawTable(lo, hi, tau).mean() - target_mean);
    if (gap < best_gap) {
      best_gap = gap;
      best = lo;
    }
  }
  return best;
}

// shuffle-and-pair stub matching; pairs failing `ok` go back to the pool
// for the next round, whatever is left after `rounds` is returned unmatched
std::vector<NodeId> match_stubs(std::vector<NodeId>& stubs, Rng& rng, EdgeVec& edges,
                                std::unordered_set<uint64_t>& seen, int rounds,
                                auto&& ok) {
  auto key = [](NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    return ((uint64_t)a << 32) | b;
  };
  std::vector<NodeId> pool = std::move(stubs);
  for (int r = 0; r < rounds && pool.size() >= 2; ++r) {
    rng.shuffle(pool);
    std::vector<NodeId> rest;
    if (pool.size() % 2) {
      rest.push_back(pool.back());
      pool.pop_back();
    }
    for (size_t i = 0; i + 1 < pool.size(); i += 2) {
      NodeId a = pool[i], b = pool[i + 1];
      uint64_t k = key(a, b);
      if (a != b && ok(a, b) && !seen.count(k)) {
        seen.insert(k);
        edges.emplace_back(a, b);
      } else {
        rest.push_back(a);
        rest.push_back(b);
      }
    }
    pool = std::move(rest);
  }
  return pool;
}

GeneratedGraph gen_lfr(const GeneratorSpec& s) {
  uint32_t n = s.size;
  Rng rng(mix_seed({s.seed, 0x6c6672ULL}));
  uint32_t c = s.lfr_communities ? s.lfr_communities : (uint32_t)(4 + rng.below(7));

  // community sizes: log-uniform weights (power law, exponent 1) within a
  // 4x spread, apportioned to sum exactly n
  std::vector<double> w(c);
  for (auto& x : w) x = std::exp(rng.uniform(0.0, std::log(4.0)));
  double wsum = 0;
  for (double x : w) wsum += x;
  std::vector<uint32_t> csize(c);
  std::vector<std::pair<double, uint32_t>> frac(c);
  uint32_t assigned = 0;
  for (uint32_t i = 0; i < c; ++i) {
    double exact = w[i] / wsum * n;
    csize[i] = (uint32_t)exact;
    frac[i] = {exact - (double)csize[i], i};
    assigned += csize[i];
  }
  std::sort(frac.begin(), frac.end(), [](auto& a, auto& b) {
    return a.first > b.first || (a.first == b.first && a.second < b.second);
  });
  for (uint32_t i = 0; assigned < n; ++i, ++assigned) ++csize[frac[i % c].second];
  uint32_t min_size = *std::min_element(csize.begin(), csize.end());
  if (min_size < 2) throw SpecError("LFR community sizes collapsed; fewer communities needed");

  // degrees: power law tau1 on [fitted, max], capped so intra stubs fit
  // into the smallest community
  uint32_t dmax = s.lfr_max_degree;
  uint32_t dcap = (uint32_t)((double)(min_size - 1) / (1.0 - s.lfr_mu));
  dmax = std::min(dmax, std::max(dcap, 2u));
  uint32_t dmin = fit_power_law_min(s.lfr_avg_degree, dmax, s.lfr_tau1);
  PowerLawTable deg_table(dmin, dmax, s.lfr_tau1);
  std::vector<uint32_t> deg(n);
  uint64_t dsum = 0;
  for (auto& d : deg) {
    d = deg_table.sample(rng);
    dsum += d;
  }
  if (dsum % 2) ++deg[rng.below(n)];

  // assignment: random community with free capacity
  std::vector<uint32_t> comm(n);
  std::vector<uint32_t> free_slots = csize;
  std::vector<NodeId> order(n);
  for (NodeId u = 0; u < n; ++u) order[u] = u;
  rng.shuffle(order);
  for (NodeId u : order) {
    uint32_t pick;
    do {
      pick = (uint32_t)rng.below(c);
    } while (!free_slots[pick]);
    --free_slots[pick];
    comm[u] = pick;
  }

  // intra/inter split with stochastic rounding so realized mixing is
  // unbiased, then stub matching
  std::vector<uint32_t> kout(n);
  for (NodeId u = 0; u < n; ++u) {
    double x = s.lfr_mu * (double)deg[u];
    auto k = (uint32_t)x;
    kout[u] = k + (rng.unit() < x - (double)k ? 1 : 0);
    if (kout[u] > deg[u]) kout[u] = deg[u];
  }

  EdgeVec edges;
  std::unordered_set<uint64_t> seen;
  std::vector<NodeId> inter_stubs;
  for (uint32_t b = 0; b < c; ++b) {
    std::vector<NodeId> stubs;
    for (NodeId u = 0; u < n; ++u)
      if (comm[u] == b)
        for (uint32_t i = kout[u]; i < deg[u]; ++i) stubs.push_back(u);
    if (stubs.size() % 2) {  // parity: push one stub out of the community
      inter_stubs.push_back(stubs.back());
      stubs.pop_back();
    }
    auto left = match_stubs(stubs, rng, edges, seen, 20,
                            [&](NodeId a, NodeId b2) { return comm[a] == comm[b2]; });
    inter_stubs.insert(inter_stubs.end(), left.begin(), left.end());
  }
  for (NodeId u = 0; u < n; ++u)
    for (uint32_t i = 0; i < kout[u]; ++i) inter_stubs.push_back(u);
  match_stubs(inter_stubs, rng, edges, seen, 20,
              [&](NodeId a, NodeId b2) { return comm[a] != comm[b2]; });

  // nudge realized mixing into the +-0.02 band around mu by double-edge swaps
  auto key = [](NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    return ((uint64_t)a << 32) | b;
  };
  uint64_t inter = 0;
  for (auto& [a, b] : edges)
    if (comm[a] != comm[b]) ++inter;
  double m_total = (double)edges.size();
  for (int attempt = 0; attempt < 20000; ++attempt) {
    double mu_hat = (double)inter / m_total;
    if (std::fabs(mu_hat - s.lfr_mu) <= 0.015) break;
    size_t i = rng.below(edges.size()), j = rng.below(edges.size());
    if (i == j) continue;
    auto [a, b] = edges[i];
    auto [c2, d] = edges[j];
    if (a == c2 || a == d || b == c2 || b == d) continue;
    bool ii = comm[a] != comm[b], jj = comm[c2] != comm[d];
    if (mu_hat < s.lfr_mu) {
      // turn two intra edges from different communities into two inter edges
      if (ii || jj || comm[a] == comm[c2]) continue;
      if (seen.count(key(a, c2)) || seen.count(key(b, d))) continue;
      seen.erase(key(a, b));
      seen.erase(key(c2, d));
      seen.insert(key(a, c2));
      seen.insert(key(b, d));
      edges[i] = {a, c2};
      edges[j] = {b, d};
      inter += 2;
    } else {
      // turn two aligned inter edges into two intra edges
      if (!ii || !jj) continue;
      if (comm[a] != comm[c2]) std::swap(c2, d);
      if (comm[a] != comm[c2] || comm[b] != comm[d]) continue;
      if (comm[a] == comm[b]) continue;
      if (seen.count(key(a, c2)) || seen.count(key(b, d))) continue;
      seen.erase(key(edges[i].first, edges[i].second));
      seen.erase(key(edges[j].first, edges[j].second));
      seen.insert(key(a, c2));
      seen.insert(key(b, d));
      edges[i] = {a, c2};
      edges[j] = {b, d};
      inter -= 2;
    }
  }
  return make(n, std::move(edges), std::move(comm));
}

// --- lattices -----------------------------------------------------------

void derive_dims(const GeneratorSpec& s, uint32_t& rows, uint32_t& cols) {
  rows = s.grid_rows;
  cols = s.grid_cols;
  if (!rows || !cols) {
    rows = std::max(2u, (uint32_t)std::lround(std::sqrt((double)s.size)));
    cols = std::max(2u, (uint32_t)std::lround((double)s.size / rows));
  }
}

GeneratedGraph gen_grid_hex(const GeneratorSpec& s) {
  uint32_t rows, cols;
  derive_dims(s, rows, cols);
  // even rows + odd cols keep every corner strut inside the lattice,
  // so boundary degrees stay in {2,3}
  rows += rows % 2;
  cols += 1 - cols % 2;
  auto id = [&](uint32_t r, uint32_t c) { return (NodeId)(r * cols + c); };
  EdgeVec edges;
  for (uint32_t r = 0; r < rows; ++r)
    for (uint32_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1));
      // brick-wall pattern: vertical struts on alternating parity
      if (r + 1 < rows && (r + c) % 2 == 0) edges.emplace_back(id(r, c), id(r + 1, c));
    }
  return make(rows * cols, std::move(edges));
}

GeneratedGraph gen_grid_tri(const GeneratorSpec& s) {
  uint32_t rows, cols;
  derive_dims(s, rows, cols);
  auto id = [&](uint32_t r, uint32_t c) { return (NodeId)(r * cols + c); };
  EdgeVec edges;
  for (uint32_t r = 0; r < rows; ++r)
    for (uint32_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1));
      if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c));
      if (r + 1 < rows && c + 1 < cols) edges.emplace_back(id(r, c), id(r + 1, c + 1));
    }
  return make(rows * cols, std::move(edges));
}

GeneratedGraph gen_hypercube(const GeneratorSpec& s) {
  uint32_t dim = s.hypercube_dim;
  if (!dim) dim = std::max(1u, (uint32_t)std::lround(std::log2((double)s.size)));
  if (dim > 24) throw SpecError("hypercube dimension too large");
  uint32_t n = 1u << dim;
  EdgeVec edges;
  edges.reserve((size_t)n * dim / 2);
  for (uint32_t x = 0; x < n; ++x)
    for (uint32_t b = 0; b < dim; ++b) {
      uint32_t y = x ^ (1u << b);
      if (x < y) edges.emplace_back(x, y);
    }
  return make(n, std::move(edges));
}

}  // namespace

GeneratedGraph generate(const GeneratorSpec& spec) {
  spec.validate();
  switch (spec.family) {
    case Family::BA: return gen_ba(spec);
    case Family::ER: return gen_er(spec);
    case Family::GRP: return gen_grp(spec);
    case Family::LFR: return gen_lfr(spec);
    case Family::GridHex: return gen_grid_hex(spec);
    case Family::GridTri: return gen_grid_tri(spec);
    case Family::Hypercube: return gen_hypercube(spec);
  }
  throw SpecError("unknown family");
}

}  // namespace estgraph

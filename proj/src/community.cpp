#include "estgraph/community.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

#include <nlohmann/json.hpp>

#include "estgraph/errors.hpp"
#include "estgraph/rng.hpp"

namespace estgraph {

Graph walk_induced_subgraph(const Graph& g, std::span<const Walk> walks) {
  if (walks.empty()) throw EmptyWalkError("no walks given");
  std::vector<NodeId> visited;
  for (const Walk& w : walks)
    for (auto [node, deg] : w.steps) visited.push_back(node);
  std::sort(visited.begin(), visited.end());
  visited.erase(std::unique(visited.begin(), visited.end()), visited.end());
  return induced_subgraph(g, visited);
}

Partition normalize_partition(std::vector<uint32_t> raw) {
  Partition p;
  uint32_t max_id = 0;
  for (uint32_t c : raw) max_id = std::max(max_id, c);
  std::vector<uint32_t> remap(raw.empty() ? 0 : (size_t)max_id + 1, UINT32_MAX);
  uint32_t next = 0;
  for (auto& c : raw) {
    if (remap[c] == UINT32_MAX) remap[c] = next++;
    c = remap[c];
  }
  p.assignment = std::move(raw);
  p.community_count = next;
  return p;
}

std::string partition_to_json(const Partition& p) {
  nlohmann::json j;
  j["community_count"] = p.community_count;
  j["assignment"] = p.assignment;
  return j.dump();
}

Partition partition_from_json(const std::string& text) {
  try {
    auto j = nlohmann::json::parse(text);
    Partition p;
    p.community_count = j.at("community_count").get<uint32_t>();
    p.assignment = j.at("assignment").get<std::vector<uint32_t>>();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("bad partition json: ") + e.what());
  }
}

double modularity(const Graph& g, const Partition& p) {
  if (p.assignment.size() != g.node_count())
    throw SpecError("partition size does not match graph");
  double m = (double)g.edge_count();
  std::vector<double> intra(p.community_count, 0), dsum(p.community_count, 0);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    dsum[p.assignment[u]] += g.degree(u);
    for (NodeId v : g.neighbors(u))
      if (u < v && p.assignment[u] == p.assignment[v]) intra[p.assignment[u]] += 1;
  }
  double q = 0;
  for (uint32_t c = 0; c < p.community_count; ++c) {
    double half = dsum[c] / (2 * m);
    q += intra[c] / m - half * half;
  }
  return q;
}

uint32_t count_communities_of_size(const Partition& p, uint32_t min_size) {
  std::vector<uint32_t> sz(p.community_count, 0);
  for (uint32_t c : p.assignment) ++sz[c];
  uint32_t n = 0;
  for (uint32_t s : sz)
    if (s >= min_size) ++n;
  return n;
}

// --- Louvain -------------------------------------------------------------

namespace {

// weighted graph for the aggregation levels; self holds the edge weight
// collapsed inside a node, weighted degree counts it twice
struct WGraph {
  uint32_t n = 0;
  std::vector<std::vector<std::pair<uint32_t, double>>> adj;
  std::vector<double> self;
  std::vector<double> wdeg;
  double m2 = 0;  // sum of weighted degrees, invariant across levels
};

WGraph wrap(const Graph& g) {
  WGraph w;
  w.n = g.node_count();
  w.adj.resize(w.n);
  w.self.assign(w.n, 0);
  w.wdeg.assign(w.n, 0);
  for (NodeId u = 0; u < w.n; ++u) {
    w.adj[u].reserve(g.degree(u));
    for (NodeId v : g.neighbors(u)) w.adj[u].emplace_back(v, 1.0);
    w.wdeg[u] = g.degree(u);
    w.m2 += w.wdeg[u];
  }
  return w;
}

// one pass hierarchy level: local moves until nothing improves
bool one_level(const WGraph& wg, Rng& rng, std::vector<uint32_t>& comm) {
  comm.resize(wg.n);
  std::vector<double> tot(wg.n);
  for (uint32_t u = 0; u < wg.n; ++u) {
    comm[u] = u;
    tot[u] = wg.wdeg[u];
  }
  std::vector<uint32_t> order(wg.n);
  for (uint32_t u = 0; u < wg.n; ++u) order[u] = u;
  rng.shuffle(order);

  std::vector<double> w_to(wg.n, 0);  // scratch: weight from u to community
  std::vector<uint32_t> touched;
  bool any_move = false;
  bool moved = true;
  int guard = 0;
  while (moved && guard++ < 100) {
    moved = false;
    for (uint32_t u : order) {
      uint32_t old = comm[u];
      touched.clear();
      for (const auto& [v, w] : wg.adj[u]) {
        uint32_t c = comm[v];
        if (w_to[c] == 0 && c != old) touched.push_back(c);
        if (v != u) w_to[c] += w;
      }
      double k_u = wg.wdeg[u];
      tot[old] -= k_u;
      double best_gain = w_to[old] - tot[old] * k_u / wg.m2;
      uint32_t best = old;
      std::sort(touched.begin(), touched.end());
      for (uint32_t c : touched) {
        double gain = w_to[c] - tot[c] * k_u / wg.m2;
        if (gain > best_gain + 1e-12) {
          best_gain = gain;
          best = c;
        }
      }
      tot[best] += k_u;
      w_to[old] = 0;
      for (uint32_t c : touched) w_to[c] = 0;
      if (best != old) {
        comm[u] = best;
        moved = true;
        any_move = true;
      }
    }
  }
  return any_move;
}

WGraph aggregate(const WGraph& wg, const std::vector<uint32_t>& comm, uint32_t ncomm) {
  WGraph out;
  out.n = ncomm;
  out.adj.resize(ncomm);
  out.self.assign(ncomm, 0);
  out.wdeg.assign(ncomm, 0);
  std::vector<std::map<uint32_t, double>> rows(ncomm);
  for (uint32_t u = 0; u < wg.n; ++u) {
    uint32_t cu = comm[u];
    out.self[cu] += wg.self[u];
    for (const auto& [v, w] : wg.adj[u]) {
      uint32_t cv = comm[v];
      if (cu == cv) {
        if (u < v) out.self[cu] += w;  // each undirected edge counted once
      } else {
        rows[cu][cv] += w;
      }
    }
  }
  for (uint32_t c = 0; c < ncomm; ++c) {
    out.adj[c].assign(rows[c].begin(), rows[c].end());
    double k = 2 * out.self[c];
    for (const auto& [v, w] : out.adj[c]) k += w;
    out.wdeg[c] = k;
    out.m2 += k;
  }
  return out;
}

}  // namespace

Partition louvain(const Graph& g, uint64_t seed) {
  Rng rng(mix_seed({seed, 0x6c6f75ULL}));
  WGraph wg = wrap(g);
  std::vector<uint32_t> global(g.node_count());
  for (NodeId u = 0; u < g.node_count(); ++u) global[u] = u;

  for (int level = 0; level < 64; ++level) {
    std::vector<uint32_t> local;
    bool improved = one_level(wg, rng, local);
    Partition lp = normalize_partition(std::move(local));
    for (auto& c : global) c = lp.assignment[c];
    if (!improved || lp.community_count == wg.n) break;
    wg = aggregate(wg, lp.assignment, lp.community_count);
  }
  Partition p = normalize_partition(std::move(global));
  if (modularity(g, p) < 0) {
    std::fill(p.assignment.begin(), p.assignment.end(), 0u);
    p.community_count = 1;
  }
  return p;
}

// --- CNM greedy agglomeration --------------------------------------------

Partition greedy_modularity(const Graph& g) {
  uint32_t n = g.node_count();
  double m = (double)g.edge_count();
  std::vector<std::map<uint32_t, double>> e(n);  // inter-community weight / 2m
  std::vector<double> a(n);                      // degree fraction
  for (NodeId u = 0; u < n; ++u) {
    a[u] = g.degree(u) / (2 * m);
    for (NodeId v : g.neighbors(u)) e[u][v] = 1.0 / (2 * m);
  }
  auto dq = [&](uint32_t i, uint32_t j) {
    auto it = e[i].find(j);
    double eij = it == e[i].end() ? 0 : it->second;
    return 2 * (eij - a[i] * a[j]);
  };

  struct Cand {
    double gain;
    uint32_t i, j;
    bool operator<(const Cand& o) const {  // max-heap: highest gain, lowest ids
      if (gain != o.gain) return gain < o.gain;
      if (i != o.i) return i > o.i;
      return j > o.j;
    }
  };
  std::priority_queue<Cand> heap;
  for (uint32_t u = 0; u < n; ++u)
    for (const auto& [v, w] : e[u])
      if (u < v) heap.push({dq(u, v), u, v});

  std::vector<bool> alive(n, true);
  std::vector<std::vector<uint32_t>> members(n);
  for (uint32_t u = 0; u < n; ++u) members[u] = {u};

  while (!heap.empty()) {
    Cand c = heap.top();
    heap.pop();
    if (!alive[c.i] || !alive[c.j]) continue;
    double cur = dq(c.i, c.j);
    if (cur != c.gain) {  // stale entry: requeue at its true gain
      if (e[c.i].count(c.j)) heap.push({cur, c.i, c.j});
      continue;
    }
    if (c.gain <= 0) break;
    uint32_t keep = c.i, drop = c.j;  // c.i < c.j always
    // merge rows
    for (const auto& [k, w] : e[drop]) {
      if (k == keep) continue;
      e[k].erase(drop);
      e[keep][k] += w;
      e[k][keep] = e[keep][k];
    }
    e[keep].erase(drop);
    a[keep] += a[drop];
    e[drop].clear();
    alive[drop] = false;
    members[keep].insert(members[keep].end(), members[drop].begin(), members[drop].end());
    members[drop].clear();
    for (const auto& [k, w] : e[keep])
      heap.push({dq(keep, k), std::min(keep, k), std::max(keep, k)});
  }

  std::vector<uint32_t> raw(n);
  for (uint32_t c = 0; c < n; ++c)
    for (uint32_t u : members[c]) raw[u] = c;
  Partition p = normalize_partition(std::move(raw));
  if (modularity(g, p) < 0) {
    std::fill(p.assignment.begin(), p.assignment.end(), 0u);
    p.community_count = 1;
  }
  return p;
}

// --- label propagation -----------------------------------------------------

Partition label_propagation(const Graph& g, uint64_t seed, uint32_t max_sweeps) {
  uint32_t n = g.node_count();
  Rng rng(mix_seed({seed, 0x6c7031ULL}));
  std::vector<uint32_t> label(n);
  for (uint32_t u = 0; u < n; ++u) label[u] = u;
  std::vector<uint32_t> order(n);
  for (uint32_t u = 0; u < n; ++u) order[u] = u;

  std::vector<uint32_t> count(n, 0);
  std::vector<uint32_t> touched, best;
  auto majorities = [&](uint32_t u) {
    touched.clear();
    uint32_t top = 0;
    for (NodeId v : g.neighbors(u)) {
      uint32_t l = label[v];
      if (count[l]++ == 0) touched.push_back(l);
      top = std::max(top, count[l]);
    }
    best.clear();
    for (uint32_t l : touched)
      if (count[l] == top) best.push_back(l);
    for (uint32_t l : touched) count[l] = 0;
  };

  // ties are re-drawn uniformly with no preference for the current label, so
  // labels keep drifting across tie plateaus; the loop therefore stops when
  // the post-sweep state is a fixed point of the majority rule (every label
  // among its neighborhood majorities), not when a sweep changes nothing
  for (uint32_t sweep = 0; sweep < max_sweeps; ++sweep) {
    rng.shuffle(order);
    for (uint32_t u : order) {
      if (g.degree(u) == 0) continue;
      majorities(u);
      std::sort(best.begin(), best.end());  // seeded pick over a stable order
      label[u] = best[rng.below(best.size())];
    }
    bool fixed = true;
    for (uint32_t u = 0; u < n && fixed; ++u) {
      if (g.degree(u) == 0) continue;
      majorities(u);
      fixed = std::find(best.begin(), best.end(), label[u]) != best.end();
    }
    if (fixed) break;
  }
  return normalize_partition(std::move(label));
}

}  // namespace estgraph

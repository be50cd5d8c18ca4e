#include "estgraph/graph.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "estgraph/errors.hpp"

namespace estgraph {

bool Graph::has_edge(NodeId u, NodeId v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

uint32_t Graph::max_degree() const {
  uint32_t d = 0;
  for (NodeId u = 0; u < n_; ++u) d = std::max(d, degree(u));
  return d;
}

void Graph::validate() const {
  if (n_ < 2 || m_ < 1) throw Error("graph must have >= 2 nodes and >= 1 edge");
  if (offsets_.size() != (size_t)n_ + 1 || offsets_[0] != 0)
    throw Error("bad offset array");
  if ((uint64_t)adj_.size() != 2 * m_) throw Error("degree sum != 2m");
  if (!labels_.empty() && labels_.size() != n_) throw Error("label array size mismatch");
  for (NodeId u = 0; u < n_; ++u) {
    auto nb = neighbors(u);
    for (size_t i = 0; i < nb.size(); ++i) {
      if (nb[i] >= n_) throw Error("neighbor id out of range");
      if (nb[i] == u) throw Error("self-loop present");
      if (i > 0 && nb[i] <= nb[i - 1]) throw Error("neighbor list not strictly sorted");
      if (!has_edge(nb[i], u)) throw Error("adjacency not symmetric");
    }
  }
}

Graph Graph::from_edges(uint32_t n, std::vector<std::pair<NodeId, NodeId>> edges,
                        std::vector<uint64_t> labels) {
  for (auto& e : edges)
    if (e.first > e.second) std::swap(e.first, e.second);
  std::erase_if(edges, [](const auto& e) { return e.first == e.second; });
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  if (edges.empty()) throw EmptyGraphError();

  Graph g;
  g.n_ = n;
  g.m_ = edges.size();
  g.labels_ = std::move(labels);
  std::vector<uint32_t> deg(n, 0);
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) throw Error("edge endpoint out of range");
    ++deg[u];
    ++deg[v];
  }
  g.offsets_.assign((size_t)n + 1, 0);
  for (NodeId u = 0; u < n; ++u) g.offsets_[u + 1] = g.offsets_[u] + deg[u];
  g.adj_.resize(2 * g.m_);
  std::vector<uint32_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& [u, v] : edges) {
    g.adj_[cursor[u]++] = v;
    g.adj_[cursor[v]++] = u;
  }
  // sorted edge input plus two-pass fill keeps each list sorted for the
  // lower endpoint only; sort per node to be safe
  for (NodeId u = 0; u < n; ++u) {
    auto* b = g.adj_.data() + g.offsets_[u];
    std::sort(b, b + deg[u]);
  }
  g.validate();
  return g;
}

Graph build_graph(std::span<const std::pair<uint64_t, uint64_t>> edges) {
  std::vector<std::pair<uint64_t, uint64_t>> kept;
  kept.reserve(edges.size());
  for (const auto& [a, b] : edges)
    if (a != b) kept.emplace_back(std::min(a, b), std::max(a, b));
  if (kept.empty()) throw EmptyGraphError("no edges after dropping self-loops");

  std::vector<uint64_t> ids;
  ids.reserve(kept.size() * 2);
  for (const auto& [a, b] : kept) {
    ids.push_back(a);
    ids.push_back(b);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (ids.size() > UINT32_MAX) throw Error("too many nodes");

  auto compact = [&](uint64_t id) -> NodeId {
    return (NodeId)(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };
  std::vector<std::pair<NodeId, NodeId>> ce;
  ce.reserve(kept.size());
  for (const auto& [a, b] : kept) ce.emplace_back(compact(a), compact(b));
  uint32_t n = (uint32_t)ids.size();
  return Graph::from_edges(n, std::move(ce), std::move(ids));
}

namespace {

// parse an unsigned integer, advancing p; returns false if none found
bool parse_u64(const char*& p, const char* end, uint64_t& out) {
  while (p < end && (*p == ' ' || *p == '\t')) ++p;
  if (p == end || *p < '0' || *p > '9') return false;
  uint64_t v = 0;
  while (p < end && *p >= '0' && *p <= '9') {
    uint64_t d = (uint64_t)(*p - '0');
    if (v > (UINT64_MAX - d) / 10) return false;
    v = v * 10 + d;
    ++p;
  }
  out = v;
  return true;
}

bool only_ws(const char* p, const char* end) {
  while (p < end) {
    if (*p != ' ' && *p != '\t' && *p != '\r') return false;
    ++p;
  }
  return true;
}

}  // namespace

Graph load_edgelist(std::istream& in, bool skip_comments) {
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string data = buf.str();

  std::vector<std::pair<uint64_t, uint64_t>> edges;
  size_t line_no = 0;
  const char* p = data.data();
  const char* data_end = p + data.size();
  while (p < data_end) {
    ++line_no;
    const char* nl = (const char*)memchr(p, '\n', (size_t)(data_end - p));
    const char* end = nl ? nl : data_end;
    const char* q = p;
    p = nl ? nl + 1 : data_end;

    while (q < end && (*q == ' ' || *q == '\t' || *q == '\r')) ++q;
    if (q == end) continue;  // blank line
    if (*q == '#') {
      if (skip_comments) continue;
      throw ParseError(line_no, "comment line not allowed here");
    }
    uint64_t a, b;
    if (!parse_u64(q, end, a)) throw ParseError(line_no, "expected two node ids");
    if (!parse_u64(q, end, b)) throw ParseError(line_no, "expected two node ids");
    if (!only_ws(q, end)) throw ParseError(line_no, "trailing junk after edge");
    edges.emplace_back(a, b);
  }
  if (edges.empty()) throw EmptyGraphError("edge list is empty");
  return build_graph(edges);
}

Graph load_edgelist_file(const std::string& path, bool skip_comments) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  return load_edgelist(f, skip_comments);
}

void save_edgelist(std::ostream& out, const Graph& g) {
  std::vector<std::pair<uint64_t, uint64_t>> lines;
  lines.reserve(g.edge_count());
  for (NodeId u = 0; u < g.node_count(); ++u)
    for (NodeId v : g.neighbors(u))
      if (u < v) {
        uint64_t a = g.label(u), b = g.label(v);
        lines.emplace_back(std::min(a, b), std::max(a, b));
      }
  std::sort(lines.begin(), lines.end());
  std::string buf;
  buf.reserve(lines.size() * 16);
  char tmp[48];
  for (const auto& [a, b] : lines) {
    int k = snprintf(tmp, sizeof tmp, "%llu %llu\n", (unsigned long long)a,
                     (unsigned long long)b);
    buf.append(tmp, (size_t)k);
  }
  out.write(buf.data(), (std::streamsize)buf.size());
}

void save_edgelist_file(const std::string& path, const Graph& g) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  save_edgelist(f, g);
  if (!f) throw IoError("write failed: " + path);
}

Graph largest_connected_component(const Graph& g) {
  uint32_t n = g.node_count();
  std::vector<int32_t> comp(n, -1);
  std::vector<NodeId> queue;
  int32_t ncomp = 0;
  uint32_t best_size = 0;
  int32_t best = -1;
  for (NodeId s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    uint32_t size = 0;
    comp[s] = ncomp;
    queue.assign(1, s);
    while (!queue.empty()) {
      NodeId u = queue.back();
      queue.pop_back();
      ++size;
      for (NodeId v : g.neighbors(u))
        if (comp[v] < 0) {
          comp[v] = ncomp;
          queue.push_back(v);
        }
    }
    if (size > best_size) {  // first (lowest root) wins ties
      best_size = size;
      best = ncomp;
    }
    ++ncomp;
  }
  if (ncomp == 1) return g;
  std::vector<NodeId> keep;
  keep.reserve(best_size);
  for (NodeId u = 0; u < n; ++u)
    if (comp[u] == best) keep.push_back(u);
  return induced_subgraph(g, keep);
}

Graph induced_subgraph(const Graph& g, std::span<const NodeId> nodes) {
  std::vector<NodeId> keep(nodes.begin(), nodes.end());
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  std::vector<NodeId> remap(g.node_count(), UINT32_MAX);
  for (size_t i = 0; i < keep.size(); ++i) remap[keep[i]] = (NodeId)i;
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::vector<uint64_t> labels(keep.size());
  for (size_t i = 0; i < keep.size(); ++i) {
    labels[i] = g.label(keep[i]);
    for (NodeId v : g.neighbors(keep[i]))
      if (keep[i] < v && remap[v] != UINT32_MAX)
        edges.emplace_back((NodeId)i, remap[v]);
  }
  return Graph::from_edges((uint32_t)keep.size(), std::move(edges), std::move(labels));
}

}  // namespace estgraph

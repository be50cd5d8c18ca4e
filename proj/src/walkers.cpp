#include "estgraph/walkers.hpp"

#include <unordered_set>

#include <nlohmann/json.hpp>

#include "estgraph/errors.hpp"

namespace estgraph {

namespace {

// drives any single-step transition rule and records the retained tail
template <typename Step>
Walk record_walk(LimitedGraphView& view, NodeId start, uint64_t length, uint64_t burn_in,
                 uint64_t seed, Step&& step) {
  Rng rng(seed);
  Walk w;
  w.start = start;
  w.seed = seed;
  w.burn_in_dropped = burn_in;
  w.steps.reserve(length + 1);
  NodeId u = start;
  uint64_t total = burn_in + length;
  for (uint64_t t = 0; t <= total; ++t) {
    if (t >= burn_in) w.steps.emplace_back(u, view.query_degree(u));
    if (t < total) u = step(u, rng);
  }
  return w;
}

}  // namespace

Walk simple_random_walk(LimitedGraphView& view, NodeId start, uint64_t length,
                        uint64_t burn_in, uint64_t seed) {
  return record_walk(view, start, length, burn_in, seed,
                     [&](NodeId u, Rng& rng) { return view.sample_random_neighbor(u, rng); });
}

Walk metropolis_hastings_walk(LimitedGraphView& view, NodeId start, uint64_t length,
                              uint64_t burn_in, uint64_t seed) {
  return record_walk(view, start, length, burn_in, seed, [&](NodeId u, Rng& rng) {
    NodeId v = view.sample_random_neighbor(u, rng);
    double du = view.query_degree(u);
    double dv = view.query_degree(v);
    return rng.unit() * dv < du ? v : u;
  });
}

Walk max_degree_walk(LimitedGraphView& view, NodeId start, uint64_t length,
                     uint64_t burn_in, uint32_t d_max, uint64_t seed) {
  if (d_max < 1) throw SpecError("d_max must be >= 1");
  return record_walk(view, start, length, burn_in, seed, [&](NodeId u, Rng& rng) {
    uint32_t du = view.query_degree(u);
    if (du > d_max)
      throw DMaxTooSmallError("degree " + std::to_string(du) + " exceeds d_max " +
                              std::to_string(d_max));
    if (rng.unit() * d_max < du) return view.sample_random_neighbor(u, rng);
    return u;
  });
}

namespace {

// pick a neighbor of u with probability w(u,v)/w(u), w(u,v) = 1/d(u) + 1/d(v)
NodeId weighted_step(LimitedGraphView& view, NodeId u, Rng& rng) {
  auto nb = view.query_neighbors(u);
  if (nb.empty()) throw IsolatedNodeError();
  double inv_du = 1.0 / (double)nb.size();
  double total = 0;
  for (NodeId v : nb) total += inv_du + 1.0 / (double)view.query_degree(v);
  double r = rng.unit() * total;
  double acc = 0;
  for (NodeId v : nb) {
    acc += inv_du + 1.0 / (double)view.query_degree(v);
    if (r < acc) return v;
  }
  return nb.back();  // numeric edge; r == total cannot round past here
}

}  // namespace

Walk weighted_walk(LimitedGraphView& view, NodeId start, uint64_t length,
                   uint64_t burn_in, uint64_t seed) {
  return record_walk(view, start, length, burn_in, seed,
                     [&](NodeId u, Rng& rng) { return weighted_step(view, u, rng); });
}

ReturnRecord weighted_return_walk(LimitedGraphView& view, NodeId start, uint32_t k,
                                  uint64_t seed, uint64_t max_steps) {
  if (k < 1) throw SpecError("k must be >= 1");
  Rng rng(seed);
  ReturnRecord rec;
  rec.start = start;
  rec.k = k;

  auto nb = view.query_neighbors(start);
  if (nb.empty()) throw IsolatedNodeError();
  double inv_ds = 1.0 / (double)nb.size();
  for (NodeId v : nb) rec.w_start += inv_ds + 1.0 / (double)view.query_degree(v);

  std::unordered_set<NodeId> seen{start};
  NodeId u = start;
  rec.degree_sum = view.query_degree(start);
  rec.positions = 1;
  uint64_t t = 0;
  while (rec.return_times.size() < k) {
    u = weighted_step(view, u, rng);
    ++t;
    seen.insert(u);
    rec.degree_sum += view.query_degree(u);
    ++rec.positions;
    if (u == start) rec.return_times.push_back(t);
    uint64_t cap = max_steps ? max_steps : 200ULL * k * seen.size();
    if (t >= cap && rec.return_times.size() < k)
      throw NonReturningError("no " + std::to_string(k) + "th return after " +
                              std::to_string(t) + " steps");
  }
  return rec;
}

std::vector<NodeId> uniform_node_sample(uint32_t n, uint64_t count, uint64_t seed) {
  if (n == 0) throw SpecError("cannot sample from an empty node set");
  Rng rng(seed);
  std::vector<NodeId> out;
  out.reserve(count);
  for (uint64_t i = 0; i < count; ++i) out.push_back((NodeId)rng.below(n));
  return out;
}

std::string walk_to_json(const Walk& w) {
  nlohmann::json j;
  j["start"] = w.start;
  j["seed"] = w.seed;
  j["burn_in"] = w.burn_in_dropped;
  auto& steps = j["steps"] = nlohmann::json::array();
  for (const auto& [node, deg] : w.steps) steps.push_back({node, deg});
  return j.dump();
}

Walk walk_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("bad walk json: ") + e.what());
  }
  Walk w;
  try {
    w.start = j.at("start").get<NodeId>();
    w.seed = j.at("seed").get<uint64_t>();
    w.burn_in_dropped = j.at("burn_in").get<uint64_t>();
    for (const auto& s : j.at("steps"))
      w.steps.emplace_back(s.at(0).get<NodeId>(), s.at(1).get<uint32_t>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("bad walk json: ") + e.what());
  }
  return w;
}

}  // namespace estgraph

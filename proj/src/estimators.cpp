#include "estgraph/estimators.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "estgraph/errors.hpp"

namespace estgraph {

const char* size_method_name(SizeMethod m) {
  switch (m) {
    case SizeMethod::Uniform: return "uniform";
    case SizeMethod::Srw: return "srw";
    case SizeMethod::Mh: return "mh";
    case SizeMethod::MaxDegree: return "max_degree";
    case SizeMethod::ReturnWalk: return "return_walk";
  }
  return "?";
}

SizeMethod size_method_from_name(std::string_view name) {
  if (name == "uniform") return SizeMethod::Uniform;
  if (name == "srw") return SizeMethod::Srw;
  if (name == "mh") return SizeMethod::Mh;
  if (name == "max_degree") return SizeMethod::MaxDegree;
  if (name == "return_walk") return SizeMethod::ReturnWalk;
  throw SpecError("unknown size method: " + std::string(name));
}

void EstimateParams::validate() const {
  if (budget_fraction <= 0 || budget_fraction > 1)
    throw SpecError("budget_fraction must be in (0, 1]");
  if (burn_in_fraction < 0 || burn_in_fraction > 1)
    throw SpecError("burn_in_fraction must be in [0, 1]");
  if (k_returns < 1) throw SpecError("k_returns must be >= 1");
}

ChapmanResult chapman_estimate(const SampleSet& s1, const SampleSet& s2) {
  if (s1.draws.empty() || s2.draws.empty()) throw EmptySampleError();
  auto distinct = [](const SampleSet& s) {
    std::vector<NodeId> d(s.draws);
    std::sort(d.begin(), d.end());
    d.erase(std::unique(d.begin(), d.end()), d.end());
    return d;
  };
  std::vector<NodeId> d1 = distinct(s1), d2 = distinct(s2);
  std::vector<NodeId> common;
  std::set_intersection(d1.begin(), d1.end(), d2.begin(), d2.end(),
                        std::back_inserter(common));
  ChapmanResult r;
  r.s1_distinct = d1.size();
  r.s2_distinct = d2.size();
  r.collisions = common.size();
  if (common.empty()) throw CollisionFreeError();
  r.n_hat = ((double)d1.size() + 1) * ((double)d2.size() + 1) / (double)common.size() - 1;
  return r;
}

double edge_estimate(double n_hat, double d_avg) { return d_avg * n_hat / 2.0; }

double return_time_estimate(const ReturnRecord& rec) {
  if (rec.k == 0 || rec.return_times.empty()) throw EmptySampleError("no returns recorded");
  return (double)rec.return_times.back() * rec.w_start / (2.0 * (double)rec.k);
}

namespace {

struct DrawnSample {
  SampleSet sample;
  double degree_sum = 0;
};

DrawnSample draw_sample(LimitedGraphView& view, uint32_t n, SizeMethod method,
                        const EstimateParams& p, uint64_t which) {
  uint64_t S = std::max<uint64_t>(1, (uint64_t)std::llround(p.budget_fraction * (double)n));
  uint64_t burn = (uint64_t)std::llround(p.burn_in_fraction * (double)n);
  DrawnSample out;
  if (method == SizeMethod::Uniform) {
    out.sample.draws = uniform_node_sample(n, S, mix_seed({p.seed, which, 1}));
    for (NodeId u : out.sample.draws) out.degree_sum += view.query_degree(u);
    return out;
  }
  NodeId start = (NodeId)Rng(mix_seed({p.seed, which, 2})).below(n);
  uint64_t wseed = mix_seed({p.seed, which, 3});
  Walk w;
  switch (method) {
    case SizeMethod::Srw:
      w = simple_random_walk(view, start, S - 1, burn, wseed);
      break;
    case SizeMethod::Mh:
      w = metropolis_hastings_walk(view, start, S - 1, burn, wseed);
      break;
    case SizeMethod::MaxDegree:
      w = max_degree_walk(view, start, S - 1, burn, p.d_max, wseed);
      break;
    default:
      throw SpecError("not a sampling method");
  }
  out.sample.draws.reserve(w.steps.size());
  for (const auto& [node, deg] : w.steps) {
    out.sample.draws.push_back(node);
    out.degree_sum += deg;
  }
  return out;
}

}  // namespace

SizeEstimate estimate_size(LimitedGraphView& view, uint32_t n, SizeMethod method,
                           const EstimateParams& params) {
  params.validate();
  if (n == 0) throw EmptyGraphError("node universe is empty");
  if (method == SizeMethod::MaxDegree && params.d_max == 0)
    throw SpecError("max_degree method needs d_max");
  uint64_t spent_before = view.spent();
  SizeEstimate est;
  est.method = method;

  if (method == SizeMethod::ReturnWalk) {
    NodeId start = (NodeId)Rng(mix_seed({params.seed, 0, 2})).below(n);
    ReturnRecord rec =
        weighted_return_walk(view, start, params.k_returns, mix_seed({params.seed, 0, 3}));
    est.n_hat = return_time_estimate(rec);
    est.d_avg = rec.degree_sum / (double)rec.positions;
    est.m_hat = edge_estimate(est.n_hat, est.d_avg);
    est.return_times = rec.return_times;
    est.s1_size = rec.positions;
    est.budget_spent = view.spent() - spent_before;
    return est;
  }

  DrawnSample a = draw_sample(view, n, method, params, 1);
  DrawnSample b = draw_sample(view, n, method, params, 2);
  ChapmanResult ch = chapman_estimate(a.sample, b.sample);
  est.n_hat = ch.n_hat;
  est.s1_size = a.sample.draws.size();
  est.s2_size = b.sample.draws.size();
  est.s1_distinct = ch.s1_distinct;
  est.s2_distinct = ch.s2_distinct;
  est.collisions = ch.collisions;
  est.d_avg = (a.degree_sum + b.degree_sum) /
              (double)(a.sample.draws.size() + b.sample.draws.size());
  est.m_hat = edge_estimate(est.n_hat, est.d_avg);
  est.budget_spent = view.spent() - spent_before;
  return est;
}

SizeEstimate estimate_size(const Graph& g, SizeMethod method, const EstimateParams& params) {
  LimitedGraphView view(g);
  EstimateParams p = params;
  if (method == SizeMethod::MaxDegree && p.d_max == 0) p.d_max = g.max_degree();
  return estimate_size(view, g.node_count(), method, p);
}

std::string size_estimate_to_json(const SizeEstimate& e) {
  nlohmann::json j;
  j["method"] = size_method_name(e.method);
  j["n_hat"] = e.n_hat;
  j["m_hat"] = e.m_hat;
  j["d_avg"] = e.d_avg;
  j["budget_spent"] = e.budget_spent;
  j["s1_size"] = e.s1_size;
  j["s2_size"] = e.s2_size;
  j["s1_distinct"] = e.s1_distinct;
  j["s2_distinct"] = e.s2_distinct;
  j["collisions"] = e.collisions;
  if (!e.return_times.empty()) j["return_times"] = e.return_times;
  return j.dump();
}

}  // namespace estgraph

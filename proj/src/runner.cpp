#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "estgraph/centrality.hpp"
#include "estgraph/community.hpp"
#include "estgraph/errors.hpp"
#include "estgraph/estimators.hpp"
#include "estgraph/harness.hpp"
#include "estgraph/rng.hpp"

namespace estgraph {

void TaskSpec::validate() const {
  if (task != "size" && task != "community" && task != "structure" && task != "topk")
    throw SpecError("unknown task: " + task);
  if (!(budget_fraction > 0 && budget_fraction <= 1))
    throw SpecError("budget_fraction must be in (0, 1]");
  if (!(burn_in_fraction >= 0 && burn_in_fraction <= 1))
    throw SpecError("burn_in_fraction must be in [0, 1]");
  if (!(structure_walk_fraction > 0 && structure_walk_fraction <= 1))
    throw SpecError("structure_walk_fraction must be in (0, 1]");
  if (k_returns < 1) throw SpecError("k_returns must be >= 1");
  if (prompt_walks < 1) throw SpecError("prompt_walks must be >= 1");
  if (structure_walks < 1) throw SpecError("structure_walks must be >= 1");
  if (community_walk_length < 1) throw SpecError("community_walk_length must be >= 1");
  if (seeds_per_community < 2 || seeds_per_community > 3)
    throw SpecError("seeds_per_community must be 2 or 3");
  if (topk_k != 20 && topk_k != 50 && topk_k != 100)
    throw SpecError("topk_k must be 20, 50 or 100");
  if (topk_measure != "pagerank" && topk_measure != "betweenness" &&
      topk_measure != "closeness")
    throw SpecError("unknown topk measure: " + topk_measure);
  if (trials < 1) throw SpecError("trials must be >= 1");
  if (timeout_seconds <= 0) throw SpecError("timeout must be positive");
}

std::vector<std::string> TaskSpec::resolved_methods() const {
  if (!methods.empty()) return methods;
  if (task == "size") return {"uniform", "srw", "mh", "max_degree", "return_walk"};
  if (task == "community") return {"louvain", "greedy", "labelprop"};
  if (task == "structure") return {"classifier"};
  return {"visit_frequency"};
}

uint64_t record_seed(uint64_t master_seed, const std::string& graph_id,
                     const std::string& method, uint32_t trial) {
  return mix_seed({master_seed, fnv1a64(graph_id), fnv1a64(method), trial});
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// walk start nodes for each planted community, seeds_per_community each
std::vector<NodeId> community_starts(const Partition& planted, uint32_t per_community,
                                     uint64_t seed) {
  std::vector<std::vector<NodeId>> members(planted.community_count);
  for (NodeId u = 0; u < planted.assignment.size(); ++u)
    members[planted.assignment[u]].push_back(u);
  Rng rng(seed);
  std::vector<NodeId> starts;
  for (auto& group : members) {
    uint32_t take = std::min<uint32_t>(per_community, (uint32_t)group.size());
    for (uint32_t j = 0; j < take; ++j) {
      size_t pick = j + rng.below(group.size() - j);
      std::swap(group[j], group[pick]);
      starts.push_back(group[j]);
    }
  }
  return starts;
}

std::vector<Walk> community_walks(LimitedGraphView& view, const Partition& planted,
                                  const TaskSpec& spec, uint64_t seed) {
  std::vector<NodeId> starts =
      community_starts(planted, spec.seeds_per_community, mix_seed({seed, 0x5eedULL}));
  std::vector<Walk> walks;
  walks.reserve(starts.size());
  for (size_t i = 0; i < starts.size(); ++i)
    walks.push_back(simple_random_walk(view, starts[i], spec.community_walk_length, 0,
                                       mix_seed({seed, 0x77ULL, i})));
  return walks;
}

// the shared structure/topk protocol: `count` walks of fraction * n steps
std::vector<Walk> fraction_walks(LimitedGraphView& view, uint32_t n, uint32_t count,
                                 double fraction, uint64_t seed) {
  uint64_t length = std::max<uint64_t>(1, (uint64_t)std::llround(fraction * n));
  std::vector<Walk> walks;
  walks.reserve(count);
  for (uint32_t i = 0; i < count; ++i) {
    NodeId start = (NodeId)Rng(mix_seed({seed, 0x57a7ULL, i})).below(n);
    walks.push_back(simple_random_walk(view, start, length, 0, mix_seed({seed, 0x11ULL, i})));
  }
  return walks;
}

// size-prompt protocol: prompt_walks srw walks with burn-in, the retained
// lengths splitting the sampling budget evenly
std::vector<Walk> size_prompt_walks(LimitedGraphView& view, uint32_t n,
                                    const TaskSpec& spec, uint64_t seed) {
  uint64_t budget = std::max<uint64_t>(1, (uint64_t)std::llround(spec.budget_fraction * n));
  uint64_t per_walk = std::max<uint64_t>(2, budget / spec.prompt_walks);
  uint64_t burn = (uint64_t)std::llround(spec.burn_in_fraction * n);
  std::vector<Walk> walks;
  walks.reserve(spec.prompt_walks);
  for (uint32_t i = 0; i < spec.prompt_walks; ++i) {
    NodeId start = (NodeId)Rng(mix_seed({seed, 0x57a7ULL, i})).below(n);
    walks.push_back(simple_random_walk(view, start, per_walk - 1, burn,
                                       mix_seed({seed, 0x11ULL, i})));
  }
  return walks;
}

Partition planted_partition(const std::string& dir, const GraphEntry& entry) {
  if (entry.labels_path.empty())
    throw SpecError("graph " + entry.id + " has no planted labels");
  return partition_from_json(read_file(dir + "/" + entry.labels_path));
}

RankedNodes truth_ranking(const std::string& dir, const GraphEntry& entry,
                          const std::string& measure) {
  if (entry.truth_path.empty())
    throw SpecError("graph " + entry.id + " has no ranking truth");
  auto j = nlohmann::json::parse(read_file(dir + "/" + entry.truth_path));
  if (!j.contains(measure)) throw SpecError("no truth for measure " + measure);
  return ranked_from_json(j.at(measure).dump());
}

std::vector<NodeId> head(const std::vector<NodeId>& v, size_t k) {
  return {v.begin(), v.begin() + std::min(k, v.size())};
}

void run_size(const Graph& g, const GraphEntry& entry, const TaskSpec& spec,
              const std::string& method, ExperimentRecord& rec) {
  EstimateParams p;
  p.budget_fraction = spec.budget_fraction;
  p.burn_in_fraction = spec.burn_in_fraction;
  p.k_returns = spec.k_returns;
  p.seed = rec.seed;
  SizeEstimate est = estimate_size(g, size_method_from_name(method), p);
  rec.estimate = {{"nodes", est.n_hat}, {"edges", est.m_hat}, {"avg_degree", est.d_avg}};
  rec.truth = {{"nodes", entry.n}, {"edges", entry.m}};
  rec.budget_spent = est.budget_spent;
}

void run_community(const Graph& g, const std::string& dir, const GraphEntry& entry,
                   const TaskSpec& spec, const std::string& method,
                   ExperimentRecord& rec) {
  Partition planted = planted_partition(dir, entry);
  LimitedGraphView view(g);
  std::vector<Walk> walks = community_walks(view, planted, spec, rec.seed);
  Graph sub = walk_induced_subgraph(g, walks);

  Partition found;
  if (method == "louvain") found = louvain(sub, mix_seed({rec.seed, 0x10ULL}));
  else if (method == "greedy") found = greedy_modularity(sub);
  else if (method == "labelprop") found = label_propagation(sub, mix_seed({rec.seed, 0x10ULL}));
  else throw SpecError("unknown community method: " + method);

  rec.estimate = {{"communities", found.community_count}};
  rec.truth = {{"communities", entry.community_count}};
  rec.budget_spent = view.spent();
}

void run_structure(const Graph& g, const GraphEntry& entry, const TaskSpec& spec,
                   const std::string& method, ExperimentRecord& rec) {
  if (method != "classifier") throw SpecError("unknown structure method: " + method);
  LimitedGraphView view(g);
  std::vector<Walk> walks = fraction_walks(view, g.node_count(), spec.structure_walks,
                                           spec.structure_walk_fraction, rec.seed);
  Anonymizer anon = make_anonymizer(mix_seed({rec.seed, 0xa0ULL}));
  std::vector<WalkStats> stats;
  stats.reserve(walks.size());
  for (const Walk& w : walks) stats.push_back(compute_walk_stats(w, anon));
  StructureLabel label = classify_structure(stats);
  rec.estimate = {{"label", structure_label_name(label)}};
  rec.truth = {{"label", structure_label_name(family_truth_label(entry.family))}};
  rec.budget_spent = view.spent();
}

void run_topk(const Graph& g, const std::string& dir, const GraphEntry& entry,
              const TaskSpec& spec, const std::string& method, ExperimentRecord& rec) {
  if (method != "visit_frequency") throw SpecError("unknown topk method: " + method);
  LimitedGraphView view(g);
  std::vector<Walk> walks = fraction_walks(view, g.node_count(), spec.structure_walks,
                                           spec.structure_walk_fraction, rec.seed);
  RankedNodes pred = visit_frequency_ranking(walks);
  RankedNodes truth = truth_ranking(dir, entry, spec.topk_measure);
  rec.estimate = {{"topk", head(pred.ordering, spec.topk_k)},
                  {"k", spec.topk_k},
                  {"measure", spec.topk_measure}};
  rec.truth = {{"topk", head(truth.ordering, spec.topk_k)}};
  rec.budget_spent = view.spent();
}

}  // namespace

std::vector<ExperimentRecord> run_task(const Manifest& mf, const std::string& dir,
                                       const TaskSpec& spec) {
  spec.validate();
  std::vector<std::string> methods = spec.resolved_methods();
  std::vector<ExperimentRecord> records;

  for (const GraphEntry& entry : mf.graphs) {
    if (entry.task != spec.task) continue;
    Graph g;
    std::string load_error;
    try {
      g = load_edgelist_file(dir + "/" + entry.path);
    } catch (const Error& e) {
      load_error = e.what();
    }
    for (const std::string& method : methods) {
      for (uint32_t trial = 0; trial < spec.trials; ++trial) {
        ExperimentRecord rec;
        rec.graph_id = entry.id;
        rec.task = spec.task;
        rec.method = method;
        rec.trial = trial;
        rec.seed = record_seed(spec.master_seed, entry.id, method, trial);
        auto t0 = std::chrono::steady_clock::now();
        try {
          if (!load_error.empty()) throw IoError(load_error);
          if (spec.task == "size") run_size(g, entry, spec, method, rec);
          else if (spec.task == "community") run_community(g, dir, entry, spec, method, rec);
          else if (spec.task == "structure") run_structure(g, entry, spec, method, rec);
          else run_topk(g, dir, entry, spec, method, rec);
        } catch (const Error& e) {
          rec.status = "failed";
          rec.error = e.what();
          rec.estimate = nullptr;
          rec.truth = nullptr;
        }
        rec.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        records.push_back(std::move(rec));
      }
    }
  }
  return records;
}

PromptArtifact render_task_prompt(const Manifest&, const std::string& dir,
                                  const TaskSpec& spec, const GraphEntry& entry,
                                  uint32_t trial) {
  spec.validate();
  Graph g = load_edgelist_file(dir + "/" + entry.path);
  uint64_t seed = record_seed(spec.master_seed, entry.id, "agent", trial);
  LimitedGraphView view(g);

  std::vector<Walk> walks;
  Task task = task_from_name(spec.task);
  if (task == Task::Size) {
    walks = size_prompt_walks(view, g.node_count(), spec, seed);
  } else if (task == Task::Community) {
    walks = community_walks(view, planted_partition(dir, entry), spec, seed);
  } else {
    walks = fraction_walks(view, g.node_count(), spec.structure_walks,
                           spec.structure_walk_fraction, seed);
  }

  Anonymizer anon = make_anonymizer(mix_seed({seed, 0xa0ULL}));
  std::vector<WalkStats> stats;
  stats.reserve(walks.size());
  for (const Walk& w : walks) stats.push_back(compute_walk_stats(w, anon));
  WalkStats combined = combine_walk_stats(walks, anon);

  PromptParams params;
  params.k = spec.topk_k;
  params.measure = spec.topk_measure;
  params.graph_ref = entry.id;
  for (const Walk& w : walks) params.walk_seeds.push_back(w.seed);
  std::ostringstream cfg;
  cfg << "task=" << spec.task << " master_seed=" << spec.master_seed << " trial=" << trial;
  params.config = cfg.str();

  return render_prompt(task, stats, combined, params);
}

namespace {

// names an agent returns map back to internal ids by undoing the offset;
// out-of-range names are dropped
std::vector<NodeId> names_to_ids(const std::vector<uint64_t>& names, const Anonymizer& anon,
                                 uint32_t n) {
  std::vector<NodeId> ids;
  for (uint64_t name : names)
    if (name >= anon.offset && name - anon.offset < n)
      ids.push_back((NodeId)(name - anon.offset));
  return ids;
}

}  // namespace

std::vector<ExperimentRecord> run_agent_task(const Manifest& mf, const std::string& dir,
                                             const TaskSpec& spec, AgentAdapter& agent) {
  spec.validate();
  std::vector<ExperimentRecord> records;

  for (const GraphEntry& entry : mf.graphs) {
    if (entry.task != spec.task) continue;
    for (uint32_t trial = 0; trial < spec.trials; ++trial) {
      ExperimentRecord rec;
      rec.graph_id = entry.id;
      rec.task = spec.task;
      rec.method = "agent:" + agent.name();
      rec.trial = trial;
      rec.seed = record_seed(spec.master_seed, entry.id, "agent", trial);
      auto t0 = std::chrono::steady_clock::now();
      try {
        PromptArtifact prompt = render_task_prompt(mf, dir, spec, entry, trial);
        Anonymizer anon = make_anonymizer(mix_seed({rec.seed, 0xa0ULL}));
        std::string response = agent.query(prompt.text);
        try {
          ParsedAnswer ans = parse_answer(prompt.task, response);
          switch (prompt.task) {
            case Task::Size:
              rec.estimate = {{"nodes", ans.number}};
              rec.truth = {{"nodes", entry.n}, {"edges", entry.m}};
              break;
            case Task::Community:
              rec.estimate = {{"communities", ans.integer}};
              rec.truth = {{"communities", entry.community_count}};
              break;
            case Task::Structure:
              rec.estimate = {{"label", structure_label_name(ans.label)}};
              rec.truth = {{"label", structure_label_name(family_truth_label(entry.family))}};
              break;
            case Task::TopK: {
              RankedNodes truth = truth_ranking(dir, entry, spec.topk_measure);
              rec.estimate = {{"topk", names_to_ids(ans.names, anon, entry.n)},
                              {"k", spec.topk_k},
                              {"measure", spec.topk_measure}};
              rec.truth = {{"topk", head(truth.ordering, spec.topk_k)}};
              break;
            }
          }
        } catch (const UnparsableError& e) {
          rec.status = "unparsed";
          rec.error = e.what();
          rec.estimate = nullptr;
          rec.truth = nullptr;
        }
      } catch (const Error& e) {
        rec.status = "failed";
        rec.error = e.what();
        rec.estimate = nullptr;
        rec.truth = nullptr;
      }
      rec.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
      records.push_back(std::move(rec));
    }
  }
  return records;
}

nlohmann::json ExperimentRecord::to_json() const {
  nlohmann::json j;
  j["graph_id"] = graph_id;
  j["task"] = task;
  j["method"] = method;
  j["trial"] = trial;
  j["seed"] = seed;
  j["status"] = status;
  j["error"] = error;
  j["estimate"] = estimate;
  j["truth"] = truth;
  j["budget_spent"] = budget_spent;
  return j;
}

ExperimentRecord ExperimentRecord::from_json(const nlohmann::json& j) {
  ExperimentRecord r;
  r.graph_id = j.at("graph_id").get<std::string>();
  r.task = j.at("task").get<std::string>();
  r.method = j.at("method").get<std::string>();
  r.trial = j.at("trial").get<uint32_t>();
  r.seed = j.at("seed").get<uint64_t>();
  r.status = j.at("status").get<std::string>();
  r.error = j.at("error").get<std::string>();
  r.estimate = j.at("estimate");
  r.truth = j.at("truth");
  r.budget_spent = j.at("budget_spent").get<uint64_t>();
  return r;
}

void save_records(std::span<const ExperimentRecord> records, const std::string& path) {
  std::vector<const ExperimentRecord*> order;
  order.reserve(records.size());
  for (const auto& r : records) order.push_back(&r);
  std::sort(order.begin(), order.end(), [](const ExperimentRecord* a, const ExperimentRecord* b) {
    return std::tie(a->task, a->graph_id, a->method, a->trial) <
           std::tie(b->task, b->graph_id, b->method, b->trial);
  });
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  for (const ExperimentRecord* r : order) out << r->to_json().dump() << "\n";
}

std::vector<ExperimentRecord> load_records(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::vector<ExperimentRecord> records;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      records.push_back(ExperimentRecord::from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(lineno, std::string("bad record: ") + e.what());
    }
  }
  return records;
}

}  // namespace estgraph

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "estgraph/agent.hpp"
#include "estgraph/generators.hpp"
#include "estgraph/graph.hpp"

namespace estgraph {

// one benchmark graph: files live next to the manifest, paths are relative
struct GraphEntry {
  std::string id;          // "<task>-<family>-<size_class>-<index>"
  std::string task;        // size | community | structure | topk
  std::string family;      // ba | er | grp | lfr | grid_hex | grid_tri | hypercube
  std::string size_class;  // small | medium | large | "" where the task has one cell
  std::string path;        // canonical edgelist
  std::string labels_path; // planted community labels (json), "" if none
  std::string truth_path;  // centrality rankings (json), "" if none
  uint64_t seed = 0;       // generation seed
  uint32_t n = 0;          // true node count
  uint64_t m = 0;          // true edge count
  uint32_t community_count = 0;  // planted, 0 if none
};

struct Manifest {
  uint64_t master_seed = 0;
  double scale = 1.0;
  std::vector<GraphEntry> graphs;  // sorted by id
};

// Generates every benchmark cell under out_dir: the size task over
// {ba, er, grp} x {small, medium, large}, one lfr cell for community
// counting, {er, ba, grid, lfr} cells for structure prediction, and one
// lfr cell for node ranking. scale multiplies the per-cell graph count
// of 100. Writes <out_dir>/manifest.json plus per-graph files and
// returns the manifest.
Manifest generate_benchmark(const std::string& out_dir, uint64_t master_seed,
                            double scale = 1.0);

void save_manifest(const Manifest& mf, const std::string& path);
Manifest load_manifest(const std::string& path);

// everything a batch run needs beyond the manifest
struct TaskSpec {
  std::string task = "size";
  std::vector<std::string> methods;     // empty -> task defaults
  double budget_fraction = 0.20;
  double burn_in_fraction = 0.10;
  uint32_t k_returns = 10;
  uint32_t prompt_walks = 5;            // walks per size prompt
  uint32_t community_walk_length = 300;
  uint32_t seeds_per_community = 2;
  uint32_t structure_walks = 5;
  double structure_walk_fraction = 0.10;
  uint32_t topk_k = 20;                 // 20, 50 or 100
  std::string topk_measure = "pagerank";
  uint32_t trials = 1;
  uint64_t master_seed = 1;
  double timeout_seconds = 300.0;       // exec adapter

  void validate() const;                // throws SpecError
  std::vector<std::string> resolved_methods() const;
};

struct ExperimentRecord {
  std::string graph_id;
  std::string task;
  std::string method;
  uint32_t trial = 0;
  uint64_t seed = 0;
  std::string status = "ok";        // ok | failed | unparsed
  std::string error;                // failure detail, "" when ok
  nlohmann::json estimate;          // task-shaped payload, null unless ok
  nlohmann::json truth;
  uint64_t budget_spent = 0;
  double wall_ms = 0;  // in-memory only; serialization drops it so reruns byte-match

  nlohmann::json to_json() const;   // wall_ms excluded
  static ExperimentRecord from_json(const nlohmann::json& j);
};

// derives the per-record seed; exposed so tests can pin it
uint64_t record_seed(uint64_t master_seed, const std::string& graph_id,
                     const std::string& method, uint32_t trial);

// Runs every (graph, method, trial) combination for spec.task over the
// manifest's graphs of that task. Classical methods only; per-record
// failures land in status/error, the batch always completes.
std::vector<ExperimentRecord> run_task(const Manifest& mf, const std::string& dir,
                                       const TaskSpec& spec);

// Same layout, but each record comes from rendering the task prompt and
// querying the adapter. Unparsable responses -> status "unparsed",
// adapter failures -> "failed".
std::vector<ExperimentRecord> run_agent_task(const Manifest& mf, const std::string& dir,
                                             const TaskSpec& spec, AgentAdapter& agent);

// renders the prompt an agent run would send for one graph and trial
PromptArtifact render_task_prompt(const Manifest& mf, const std::string& dir,
                                  const TaskSpec& spec, const GraphEntry& entry,
                                  uint32_t trial = 0);

void save_records(std::span<const ExperimentRecord> records, const std::string& path);
std::vector<ExperimentRecord> load_records(const std::string& path);

// one scored group: a (task, family, size_class, metric) cell for one method
struct ScoreRow {
  std::string task;
  std::string family;
  std::string size_class;
  std::string method;
  std::string metric;   // rel_err_pct | edge_rel_err_pct | mae | accuracy | precision_at_k
  uint64_t ok = 0;
  uint64_t failed = 0;
  uint64_t unparsed = 0;
  // stats over ok records; error metrics are capped at 10000% here
  double median = 0, mean = 0, stddev = 0;
  // same stats without the cap (only differs for the error metrics)
  double raw_median = 0, raw_mean = 0, raw_stddev = 0;
  uint32_t rank = 0;    // 1-based among methods in the cell, 0 when no ok records
};

struct ScoreTable {
  std::vector<ScoreRow> rows;  // sorted by (task, family, size_class, metric, method)
};

ScoreTable score(std::span<const ExperimentRecord> records);

// CSV: fixed column order, one row per ScoreRow, %.10g numbers.
// JSON: array of row objects with every field; round-trips via table_from_json.
std::string table_to_csv(const ScoreTable& t);
std::string table_to_json(const ScoreTable& t);
ScoreTable table_from_json(const std::string& text);
void emit(const ScoreTable& t, const std::string& csv_path, const std::string& json_path);

// helpers shared by runner, scoring and tests
StructureLabel family_truth_label(const std::string& family);
double relative_error_pct(double estimate, double truth);

}  // namespace estgraph

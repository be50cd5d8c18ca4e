#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "estgraph/errors.hpp"
#include "estgraph/estimators.hpp"
#include "estgraph/harness.hpp"

using namespace estgraph;

namespace {

// TaskSpec flags shared by prompt, agent-run and bench; a --config file in
// key=value form feeds the same names, explicit flags win
void add_spec_flags(CLI::App* cmd, TaskSpec& spec) {
  cmd->add_option("--budget-fraction", spec.budget_fraction, "sample size as a fraction of n");
  cmd->add_option("--burn-in-fraction", spec.burn_in_fraction, "walk burn-in fraction of n");
  cmd->add_option("--k-returns", spec.k_returns, "returns for the return-walk method");
  cmd->add_option("--prompt-walks", spec.prompt_walks, "walks per size prompt");
  cmd->add_option("--community-walk-length", spec.community_walk_length,
                  "srw length for community walks");
  cmd->add_option("--seeds-per-community", spec.seeds_per_community,
                  "walk starts per planted community (2 or 3)");
  cmd->add_option("--structure-walks", spec.structure_walks, "walks for structure/topk");
  cmd->add_option("--structure-walk-fraction", spec.structure_walk_fraction,
                  "walk length as a fraction of n");
  cmd->add_option("--k", spec.topk_k, "top-k size (20, 50 or 100)");
  cmd->add_option("--measure", spec.topk_measure, "topk truth measure");
  cmd->add_option("--trials", spec.trials, "trials per (graph, method)");
  cmd->add_option("--master-seed", spec.master_seed, "seed for all per-record derivations");
  cmd->add_option("--timeout", spec.timeout_seconds, "agent timeout in seconds");
  cmd->set_config("--config", "", "key=value file with these option names");
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << body;
}

struct FetchEntry {
  const char* name;
  const char* url;
};

const FetchEntry kFetchTable[] = {
    {"as-skitter", "https://snap.stanford.edu/data/as-skitter.txt.gz"},
    {"twitch-gamers", "https://snap.stanford.edu/data/twitch_gamers.zip"},
    {"email-EuAll", "https://snap.stanford.edu/data/email-EuAll.txt.gz"},
    {"wiki-Talk", "https://snap.stanford.edu/data/wiki-Talk.txt.gz"},
    {"ego-Twitter", "https://snap.stanford.edu/data/twitter_combined.txt.gz"},
};

// Downloads through curl. The first successful fetch records the archive's
// sha256 next to it; every later fetch verifies against that pin, so a
// changed upstream file is caught instead of silently replacing data.
int run_fetch(const std::string& out_dir, const std::string& name) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  bool any = false, failed = false;
  for (const FetchEntry& e : kFetchTable) {
    if (!name.empty() && name != e.name) continue;
    any = true;
    std::string url(e.url);
    std::string dest = out_dir + "/" + fs::path(url).filename().string();
    std::string pin = dest + ".sha256";
    if (!fs::exists(dest)) {
      std::string cmd = "curl -fsSL --retry 2 -o '" + dest + ".part' '" + url +
                        "' && mv '" + dest + ".part' '" + dest + "'";
      std::printf("fetching %s\n", e.name);
      if (std::system(cmd.c_str()) != 0) {
        std::fprintf(stderr, "download failed for %s (offline?); skipping\n", e.name);
        failed = true;
        continue;
      }
    }
    if (fs::exists(pin)) {
      std::string check = "sha256sum -c --quiet '" + pin + "'";
      if (std::system(check.c_str()) != 0) {
        std::fprintf(stderr, "checksum mismatch for %s (pinned in %s)\n", dest.c_str(),
                     pin.c_str());
        failed = true;
        continue;
      }
    } else {
      std::string record = "sha256sum '" + dest + "' > '" + pin + "'";
      if (std::system(record.c_str()) != 0) {
        std::fprintf(stderr, "could not record checksum for %s\n", dest.c_str());
        failed = true;
        continue;
      }
    }
    std::printf("%s ok: %s\n", e.name, dest.c_str());
  }
  if (!any) {
    std::fprintf(stderr, "unknown dataset: %s\n", name.c_str());
    return 1;
  }
  return failed ? 1 : 0;
}

std::vector<std::string> tasks_to_run(const std::string& task) {
  if (task == "all") return {"size", "community", "structure", "topk"};
  return {task};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random-walk graph estimation toolkit"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "generate the benchmark graphs");
  std::string gen_out = "benchmark";
  uint64_t gen_seed = 1;
  double gen_scale = 1.0;
  generate->add_option("--out", gen_out, "output directory");
  generate->add_option("--seed", gen_seed, "master seed");
  generate->add_option("--scale", gen_scale, "fraction of the 100-per-cell graph counts");

  // fetch
  auto* fetch = app.add_subcommand("fetch", "download real-world datasets with checksums");
  std::string fetch_out = "data";
  std::string fetch_name;
  fetch->add_option("--out", fetch_out, "download directory");
  fetch->add_option("--name", fetch_name, "dataset name (default: all)");

  // estimate
  auto* estimate = app.add_subcommand("estimate", "size estimate for one graph");
  std::string est_graph, est_method = "uniform";
  EstimateParams est_params;
  uint32_t est_dmax = 0;
  estimate->add_option("--graph", est_graph, "edgelist path")->required();
  estimate->add_option("--method", est_method, "uniform|srw|mh|max_degree|return_walk");
  estimate->add_option("--budget-fraction", est_params.budget_fraction, "");
  estimate->add_option("--burn-in-fraction", est_params.burn_in_fraction, "");
  estimate->add_option("--k-returns", est_params.k_returns, "");
  estimate->add_option("--d-max", est_dmax, "max-degree walk bound (0 = true max)");
  estimate->add_option("--seed", est_params.seed, "");

  // prompt
  auto* prompt = app.add_subcommand("prompt", "render task prompts from a manifest");
  std::string prompt_manifest, prompt_out = "prompts", prompt_graph;
  TaskSpec prompt_spec;
  prompt->add_option("--manifest", prompt_manifest, "manifest.json path")->required();
  prompt->add_option("--task", prompt_spec.task, "size|community|structure|topk")->required();
  prompt->add_option("--graph", prompt_graph, "single graph id (default: all of the task)");
  prompt->add_option("--out", prompt_out, "output directory");
  add_spec_flags(prompt, prompt_spec);

  // agent-run
  auto* agent_run = app.add_subcommand("agent-run", "query an agent over rendered prompts");
  std::string ar_manifest, ar_replay, ar_exec;
  std::string ar_records = "agent_records.jsonl";
  std::string ar_csv = "agent_scores.csv", ar_json = "agent_scores.json";
  TaskSpec ar_spec;
  agent_run->add_option("--manifest", ar_manifest, "manifest.json path")->required();
  agent_run->add_option("--task", ar_spec.task, "size|community|structure|topk")->required();
  agent_run->add_option("--replay", ar_replay, "stored-response directory");
  agent_run->add_option("--exec", ar_exec, "command reading stdin, writing stdout");
  agent_run->add_option("--records", ar_records, "records jsonl output");
  agent_run->add_option("--score-csv", ar_csv, "score table csv output");
  agent_run->add_option("--score-json", ar_json, "score table json output");
  add_spec_flags(agent_run, ar_spec);

  // score
  auto* score_cmd = app.add_subcommand("score", "score a records file");
  std::string sc_records, sc_csv = "scores.csv", sc_json = "scores.json";
  score_cmd->add_option("--records", sc_records, "records jsonl path")->required();
  score_cmd->add_option("--csv", sc_csv, "csv output");
  score_cmd->add_option("--json", sc_json, "json output");

  // bench
  auto* bench = app.add_subcommand("bench", "generate, run every classical method, score");
  std::string bench_out = "bench";
  std::string bench_task = "all";
  double bench_scale = 0.1;
  TaskSpec bench_spec;
  bench->add_option("--out", bench_out, "working directory");
  bench->add_option("--scale", bench_scale, "benchmark scale");
  bench->add_option("--task", bench_task, "size|community|structure|topk|all");
  add_spec_flags(bench, bench_spec);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) {
      Manifest mf = generate_benchmark(gen_out, gen_seed, gen_scale);
      std::printf("wrote %s/manifest.json with %zu graphs\n", gen_out.c_str(),
                  mf.graphs.size());
    } else if (*fetch) {
      return run_fetch(fetch_out, fetch_name);
    } else if (*estimate) {
      Graph g = load_edgelist_file(est_graph);
      est_params.d_max = est_dmax;
      SizeEstimate est = estimate_size(g, size_method_from_name(est_method), est_params);
      std::printf("%s\n", size_estimate_to_json(est).c_str());
    } else if (*prompt) {
      std::string dir = std::filesystem::path(prompt_manifest).parent_path().string();
      if (dir.empty()) dir = ".";
      Manifest mf = load_manifest(prompt_manifest);
      std::filesystem::create_directories(prompt_out);
      size_t count = 0;
      for (const GraphEntry& e : mf.graphs) {
        if (e.task != prompt_spec.task) continue;
        if (!prompt_graph.empty() && e.id != prompt_graph) continue;
        PromptArtifact p = render_task_prompt(mf, dir, prompt_spec, e);
        write_file(prompt_out + "/" + e.id + ".prompt.txt", p.text);
        write_file(prompt_out + "/" + e.id + ".prompt.json", prompt_to_json(p));
        ++count;
      }
      std::printf("wrote %zu prompts to %s\n", count, prompt_out.c_str());
    } else if (*agent_run) {
      if (ar_replay.empty() == ar_exec.empty())
        throw SpecError("agent-run needs exactly one of --replay or --exec");
      std::string dir = std::filesystem::path(ar_manifest).parent_path().string();
      if (dir.empty()) dir = ".";
      Manifest mf = load_manifest(ar_manifest);
      std::unique_ptr<AgentAdapter> agent;
      if (!ar_replay.empty())
        agent = std::make_unique<ReplayAdapter>(ar_replay);
      else
        agent = std::make_unique<ExecAdapter>(ar_exec, ar_spec.timeout_seconds);
      std::vector<ExperimentRecord> records = run_agent_task(mf, dir, ar_spec, *agent);
      save_records(records, ar_records);
      ScoreTable table = score(records);
      emit(table, ar_csv, ar_json);
      size_t ok = 0, failed = 0, unparsed = 0;
      for (const auto& r : records) {
        ok += r.status == "ok";
        failed += r.status == "failed";
        unparsed += r.status == "unparsed";
      }
      std::printf("%zu records: %zu ok, %zu failed, %zu unparsed\n", records.size(), ok,
                  failed, unparsed);
    } else if (*score_cmd) {
      ScoreTable table = score(load_records(sc_records));
      emit(table, sc_csv, sc_json);
      std::printf("wrote %s and %s (%zu rows)\n", sc_csv.c_str(), sc_json.c_str(),
                  table.rows.size());
    } else if (*bench) {
      Manifest mf = generate_benchmark(bench_out, bench_spec.master_seed, bench_scale);
      std::vector<ExperimentRecord> all;
      for (const std::string& task : tasks_to_run(bench_task)) {
        TaskSpec spec = bench_spec;
        spec.task = task;
        spec.methods.clear();
        std::vector<ExperimentRecord> records = run_task(mf, bench_out, spec);
        all.insert(all.end(), records.begin(), records.end());
      }
      save_records(all, bench_out + "/records.jsonl");
      ScoreTable table = score(all);
      emit(table, bench_out + "/scores.csv", bench_out + "/scores.json");
      size_t ok = 0;
      for (const auto& r : all) ok += r.status == "ok";
      std::printf("bench: %zu graphs, %zu records (%zu ok), tables in %s\n",
                  mf.graphs.size(), all.size(), ok, bench_out.c_str());
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "estgraph/centrality.hpp"
#include "estgraph/community.hpp"
#include "estgraph/errors.hpp"
#include "estgraph/harness.hpp"
#include "estgraph/rng.hpp"

namespace estgraph {

namespace {

struct SizeClass {
  const char* name;
  uint32_t lo, hi;
};
constexpr SizeClass kSmall{"small", 100, 1000};
constexpr SizeClass kMedium{"medium", 1000, 10000};
constexpr SizeClass kLarge{"large", 10000, 100000};

uint32_t draw_size(Rng& rng, const SizeClass& c) {
  return c.lo + (uint32_t)rng.below(c.hi - c.lo + 1);
}

GeneratorSpec draw_ba(Rng& rng, uint32_t n) {
  GeneratorSpec s;
  s.family = Family::BA;
  s.size = n;
  s.ba_m = 3 + (uint32_t)rng.below(3);
  return s;
}

GeneratorSpec draw_er(Rng& rng, uint32_t n) {
  GeneratorSpec s;
  s.family = Family::ER;
  s.size = n;
  s.er_edge_multiplier = rng.uniform(5.0, 10.0);
  return s;
}

GeneratorSpec draw_grp(Rng& rng, uint32_t n) {
  GeneratorSpec s;
  s.family = Family::GRP;
  s.size = n;
  s.grp_mean_block = rng.uniform(0.05, 0.2) * n;
  s.grp_variance = s.grp_mean_block / 2.0;
  // keep expected degrees flat across size classes: ~31 intra edges per
  // node and ~10 inter edges per node once blocks outgrow the raw defaults
  s.grp_p_in = std::min(0.25, 31.25 / s.grp_mean_block);
  s.grp_p_out = std::min(0.01, 10.0 / n);
  return s;
}

GeneratorSpec draw_lfr(Rng& rng, uint32_t lo, uint32_t hi) {
  GeneratorSpec s;
  s.family = Family::LFR;
  s.size = lo + (uint32_t)rng.below(hi - lo + 1);
  s.lfr_mu = 0.1;
  s.lfr_communities = 5 + (uint32_t)rng.below(8);
  return s;
}

GeneratorSpec draw_grid(Rng& rng, uint32_t index) {
  GeneratorSpec s;
  switch (index % 3) {
    case 0: {
      s.family = Family::GridHex;
      uint32_t side = (uint32_t)std::lround(std::sqrt(1000.0 + rng.below(9001)));
      s.grid_rows = s.grid_cols = side;
      break;
    }
    case 1: {
      s.family = Family::GridTri;
      uint32_t side = (uint32_t)std::lround(std::sqrt(1000.0 + rng.below(9001)));
      s.grid_rows = s.grid_cols = side;
      break;
    }
    default:
      s.family = Family::Hypercube;
      s.hypercube_dim = 10 + (uint32_t)rng.below(4);  // 1024..8192 nodes
  }
  return s;
}

struct Cell {
  const char* task;
  const char* family;  // cell label; grid cells rotate concrete lattices
  const SizeClass* size_class;
};

const Cell kCells[] = {
    {"size", "ba", &kSmall},   {"size", "ba", &kMedium},   {"size", "ba", &kLarge},
    {"size", "er", &kSmall},   {"size", "er", &kMedium},   {"size", "er", &kLarge},
    {"size", "grp", &kSmall},  {"size", "grp", &kMedium},  {"size", "grp", &kLarge},
    {"community", "lfr", nullptr},
    {"structure", "er", nullptr}, {"structure", "ba", nullptr},
    {"structure", "grid", nullptr}, {"structure", "lfr", nullptr},
    {"topk", "lfr", nullptr},
};

GeneratorSpec draw_cell_spec(const Cell& cell, Rng& rng, uint32_t index) {
  std::string family = cell.family;
  if (cell.task == std::string("size")) {
    uint32_t n = draw_size(rng, *cell.size_class);
    if (family == "ba") return draw_ba(rng, n);
    if (family == "er") return draw_er(rng, n);
    return draw_grp(rng, n);
  }
  if (cell.task == std::string("structure")) {
    // ba/er reuse medium-class sizes; lfr and grids go up to 10k nodes
    if (family == "ba") return draw_ba(rng, draw_size(rng, kMedium));
    if (family == "er") return draw_er(rng, draw_size(rng, kMedium));
    if (family == "grid") return draw_grid(rng, index);
    return draw_lfr(rng, 1000, 10000);
  }
  return draw_lfr(rng, 1000, 5000);  // community and topk cells
}

RankedNodes trim_ranking(RankedNodes r, size_t keep) {
  if (r.ordering.size() > keep) {
    r.ordering.resize(keep);
    r.scores.resize(keep);
  }
  return r;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << body;
}

}  // namespace

Manifest generate_benchmark(const std::string& out_dir, uint64_t master_seed, double scale) {
  if (scale <= 0) throw SpecError("scale must be positive");
  uint32_t per_cell = std::max<uint32_t>(1, (uint32_t)std::llround(100.0 * scale));

  namespace fs = std::filesystem;
  fs::create_directories(out_dir + "/graphs");
  fs::create_directories(out_dir + "/truth");

  Manifest mf;
  mf.master_seed = master_seed;
  mf.scale = scale;

  for (const Cell& cell : kCells) {
    std::string size_class = cell.size_class ? cell.size_class->name : "";
    uint64_t cell_seed = mix_seed({master_seed, fnv1a64(cell.task), fnv1a64(cell.family),
                                   fnv1a64(size_class)});
    for (uint32_t i = 0; i < per_cell; ++i) {
      Rng rng(mix_seed({cell_seed, i}));
      GeneratorSpec spec = draw_cell_spec(cell, rng, i);
      spec.seed = mix_seed({cell_seed, i, 1});

      GeneratedGraph gen = generate(spec);
      const Graph& g = gen.graph;

      GraphEntry e;
      char idbuf[96];
      if (size_class.empty())
        snprintf(idbuf, sizeof idbuf, "%s-%s-%04u", cell.task, cell.family, i);
      else
        snprintf(idbuf, sizeof idbuf, "%s-%s-%s-%04u", cell.task, cell.family,
                 size_class.c_str(), i);
      e.id = idbuf;
      e.task = cell.task;
      e.family = cell.family;
      e.size_class = size_class;
      e.seed = spec.seed;
      e.n = g.node_count();
      e.m = g.edge_count();
      e.path = "graphs/" + e.id + ".edges";
      save_edgelist_file(out_dir + "/" + e.path, g);

      if (gen.communities) {
        Partition p = normalize_partition(*gen.communities);
        e.community_count = p.community_count;
        e.labels_path = "truth/" + e.id + ".labels.json";
        write_file(out_dir + "/" + e.labels_path, partition_to_json(p));
      }
      if (e.task == "topk") {
        nlohmann::json truth;
        truth["pagerank"] =
            nlohmann::json::parse(ranked_to_json(trim_ranking(rank_by_score(pagerank(g)), 200)));
        truth["betweenness"] =
            nlohmann::json::parse(ranked_to_json(trim_ranking(rank_by_score(betweenness(g)), 200)));
        truth["closeness"] =
            nlohmann::json::parse(ranked_to_json(trim_ranking(rank_by_score(closeness(g)), 200)));
        e.truth_path = "truth/" + e.id + ".rank.json";
        write_file(out_dir + "/" + e.truth_path, truth.dump());
      }
      mf.graphs.push_back(std::move(e));
    }
  }

  std::sort(mf.graphs.begin(), mf.graphs.end(),
            [](const GraphEntry& a, const GraphEntry& b) { return a.id < b.id; });
  save_manifest(mf, out_dir + "/manifest.json");
  return mf;
}

namespace {

nlohmann::json entry_to_json(const GraphEntry& e) {
  nlohmann::json j;
  j["id"] = e.id;
  j["task"] = e.task;
  j["family"] = e.family;
  j["size_class"] = e.size_class;
  j["path"] = e.path;
  j["labels_path"] = e.labels_path;
  j["truth_path"] = e.truth_path;
  j["seed"] = e.seed;
  j["n"] = e.n;
  j["m"] = e.m;
  j["community_count"] = e.community_count;
  return j;
}

GraphEntry entry_from_json(const nlohmann::json& j) {
  GraphEntry e;
  e.id = j.at("id").get<std::string>();
  e.task = j.at("task").get<std::string>();
  e.family = j.at("family").get<std::string>();
  e.size_class = j.at("size_class").get<std::string>();
  e.path = j.at("path").get<std::string>();
  e.labels_path = j.at("labels_path").get<std::string>();
  e.truth_path = j.at("truth_path").get<std::string>();
  e.seed = j.at("seed").get<uint64_t>();
  e.n = j.at("n").get<uint32_t>();
  e.m = j.at("m").get<uint64_t>();
  e.community_count = j.at("community_count").get<uint32_t>();
  return e;
}

}  // namespace

void save_manifest(const Manifest& mf, const std::string& path) {
  nlohmann::json j;
  j["master_seed"] = mf.master_seed;
  j["scale"] = mf.scale;
  auto& arr = j["graphs"] = nlohmann::json::array();
  for (const GraphEntry& e : mf.graphs) arr.push_back(entry_to_json(e));
  write_file(path, j.dump(2) + "\n");
}

Manifest load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  nlohmann::json j;
  try {
    in >> j;
    Manifest mf;
    mf.master_seed = j.at("master_seed").get<uint64_t>();
    mf.scale = j.at("scale").get<double>();
    for (const auto& e : j.at("graphs")) mf.graphs.push_back(entry_from_json(e));
    return mf;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("bad manifest: ") + e.what());
  }
}

StructureLabel family_truth_label(const std::string& family) {
  if (family == "ba") return StructureLabel::BA;
  if (family == "er") return StructureLabel::ER;
  if (family == "lfr") return StructureLabel::LFR;
  if (family == "grid" || family == "grid_hex" || family == "grid_tri" ||
      family == "hypercube")
    return StructureLabel::Grid;
  throw SpecError("no structure label for family " + family);
}

}  // namespace estgraph

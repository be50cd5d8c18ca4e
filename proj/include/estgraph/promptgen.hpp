#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "estgraph/walkers.hpp"

namespace estgraph {

enum class Task { Size, Community, Structure, TopK };
const char* task_name(Task t);
Task task_from_name(std::string_view name);

enum class StructureLabel { BA, ER, LFR, Grid };
const char* structure_label_name(StructureLabel l);
StructureLabel structure_label_from_name(std::string_view name);

// Node names shown to an agent are real ids plus a large per-graph offset,
// so answers can be mapped back while leaking nothing about id ranges.
struct Anonymizer {
  uint64_t seed = 0;
  uint64_t offset = 0;
  uint64_t name(NodeId u) const { return offset + u; }
};

// offset drawn once from [10^6, 10^9)
Anonymizer make_anonymizer(uint64_t seed);
std::vector<uint64_t> anonymize(std::span<const NodeId> nodes, const Anonymizer& a);

// Everything an estimation prompt reports about one walk. Node-level
// fields carry anonymized names. Degree aggregates (histogram, avg, the
// decile discovery counts' total) are over distinct visited nodes;
// walk_length counts transitions, so a walk of k positions has length k-1.
struct WalkStats {
  uint64_t walk_length = 0;
  uint64_t unique_nodes = 0;
  uint64_t unique_edges = 0;
  std::optional<uint64_t> first_collision_step;  // position of first revisit
  std::optional<uint64_t> first_return_step;     // first position equal to position 0
  std::array<uint64_t, 10> decile_new_nodes{};
  std::vector<uint64_t> sampled_names;                          // ascending
  std::vector<std::pair<uint64_t, uint32_t>> top10_degrees;     // (name, degree), best first
  std::vector<std::pair<uint64_t, uint32_t>> bottom10_degrees;  // lowest first
  std::vector<std::pair<uint32_t, uint64_t>> degree_histogram;  // degree -> count, ascending
  double avg_degree = 0;
  // per-node visit records for the community/structure/topk prompt variants
  std::vector<std::tuple<uint64_t, uint64_t, uint32_t>> node_records;  // (name, visits, degree)
};

WalkStats compute_walk_stats(const Walk& walk, const Anonymizer& a);

// Pooled view over several walks: positions are concatenated in walk order
// (collision/return indices refer to that pooled sequence), edges are the
// union of the per-walk edge sets, walk_length sums the per-walk lengths.
WalkStats combine_walk_stats(std::span<const Walk> walks, const Anonymizer& a);

struct PromptParams {
  std::string size_target = "nodes";  // "nodes" or "edges"
  uint32_t k = 20;                    // topk
  std::string measure = "pagerank";   // topk
  uint32_t histogram_max_rows = 50;
  // provenance, copied into the artifact
  std::string graph_ref;
  std::vector<uint64_t> walk_seeds;
  std::string config;
};

struct PromptArtifact {
  Task task = Task::Size;
  std::string text;
  uint64_t token_estimate = 0;
  std::string graph_ref;
  std::vector<uint64_t> walk_seeds;
  std::string config;
};

std::string prompt_to_json(const PromptArtifact& p);

// template_v1. The size task renders the full per-walk field list plus a
// combined section; community/structure/topk render per-node visit/degree
// records instead. The last line always demands "ANSWER: <value>".
PromptArtifact render_prompt(Task task, std::span<const WalkStats> walks,
                             const WalkStats& combined, const PromptParams& params);

// ceil(bytes / 4)
uint64_t estimate_tokens(std::string_view text);

struct ParsedAnswer {
  Task task = Task::Size;
  double number = 0;                              // size
  int64_t integer = 0;                            // community
  StructureLabel label = StructureLabel::ER;      // structure
  std::vector<uint64_t> names;                    // topk
};

// Reads the last "ANSWER:" line of an agent response; falls back to the
// last number (or label word) found anywhere in the text. Throws
// UnparsableError when nothing usable is present.
ParsedAnswer parse_answer(Task task, const std::string& response);

}  // namespace estgraph

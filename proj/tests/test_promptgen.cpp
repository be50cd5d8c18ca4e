#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cctype>
#include <set>
#include <string>
#include <vector>

#include "estgraph/errors.hpp"
#include "estgraph/generators.hpp"
#include "estgraph/promptgen.hpp"
#include "estgraph/rng.hpp"
#include "estgraph/walkers.hpp"
#include "oracles.hpp"

#include <nlohmann/json.hpp>

using namespace estgraph;

namespace {

Walk make_walk(std::vector<std::pair<NodeId, uint32_t>> steps) {
  Walk w;
  w.start = steps.at(0).first;
  w.steps = std::move(steps);
  return w;
}

size_t count_occurrences(const std::string& text, const std::string& needle) {
  size_t count = 0, pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

// the walk 0,1,0,1 on K2: two visits per node, collision and return at 2
WalkStats k2_stats(const Anonymizer& anon) {
  Walk w = make_walk({{0, 1}, {1, 1}, {0, 1}, {1, 1}});
  return compute_walk_stats(w, anon);
}

}  // namespace

TEST_CASE("compute_walk_stats: alternating walk on two nodes") {
  Anonymizer anon = make_anonymizer(4);
  WalkStats s = k2_stats(anon);
  CHECK(s.walk_length == 3);
  CHECK(s.unique_nodes == 2);
  CHECK(s.unique_edges == 1);
  REQUIRE(s.first_collision_step.has_value());
  CHECK(*s.first_collision_step == 2);
  REQUIRE(s.first_return_step.has_value());
  CHECK(*s.first_return_step == 2);
  CHECK(s.degree_histogram == std::vector<std::pair<uint32_t, uint64_t>>{{1, 2}});
  CHECK(s.avg_degree == doctest::Approx(1.0));
  uint64_t decile_sum = 0;
  for (uint64_t d : s.decile_new_nodes) decile_sum += d;
  CHECK(decile_sum == s.unique_nodes);
  REQUIRE(s.node_records.size() == 2);
  CHECK(s.node_records[0] == std::tuple<uint64_t, uint64_t, uint32_t>{anon.name(0), 2, 1});
  CHECK(s.node_records[1] == std::tuple<uint64_t, uint64_t, uint32_t>{anon.name(1), 2, 1});
}

TEST_CASE("compute_walk_stats: a walk with no revisits reports neither step") {
  Anonymizer anon = make_anonymizer(4);
  Walk w = make_walk({{0, 1}, {1, 2}, {2, 1}});
  WalkStats s = compute_walk_stats(w, anon);
  CHECK_FALSE(s.first_collision_step.has_value());
  CHECK_FALSE(s.first_return_step.has_value());
  CHECK(s.unique_nodes == 3);
  CHECK(s.unique_edges == 2);
}

TEST_CASE("compute_walk_stats: decile discovery counts add up to unique nodes") {
  Graph g = oracle::cycle_graph(100);
  LimitedGraphView view(g);
  Walk w = simple_random_walk(view, 0, 1000, 0, 12);
  Anonymizer anon = make_anonymizer(8);
  WalkStats s = compute_walk_stats(w, anon);
  uint64_t total = 0;
  for (uint64_t d : s.decile_new_nodes) total += d;
  CHECK(total == s.unique_nodes);
  CHECK(s.walk_length == 1000);
  REQUIRE(!s.top10_degrees.empty());
  CHECK(s.top10_degrees.front().second == 2);
  CHECK(s.avg_degree == doctest::Approx(2.0));
}

TEST_CASE("compute_walk_stats: empty walk throws") {
  Walk w;
  Anonymizer anon = make_anonymizer(1);
  CHECK_THROWS_AS(compute_walk_stats(w, anon), EmptyWalkError);
}

TEST_CASE("combine_walk_stats: pooled positions and union edges") {
  Anonymizer anon = make_anonymizer(4);
  std::vector<Walk> walks{make_walk({{0, 1}, {1, 1}}), make_walk({{1, 1}, {0, 1}})};
  WalkStats s = combine_walk_stats(walks, anon);
  CHECK(s.walk_length == 2);
  CHECK(s.unique_nodes == 2);
  CHECK(s.unique_edges == 1);
  REQUIRE(s.first_collision_step.has_value());
  CHECK(*s.first_collision_step == 2);  // pooled position of walk 2's start
  REQUIRE(s.first_return_step.has_value());
  CHECK(*s.first_return_step == 3);  // origin is walk 1's start
  std::vector<Walk> none;
  CHECK_THROWS_AS(combine_walk_stats(none, anon), EmptyStatsError);
}

TEST_CASE("anonymizer: deterministic offset in the advertised range") {
  Anonymizer a = make_anonymizer(7);
  Anonymizer b = make_anonymizer(7);
  CHECK(a.offset == b.offset);
  CHECK(a.offset >= 1000000ULL);
  CHECK(a.offset < 1000000000ULL);
  CHECK(make_anonymizer(8).offset != a.offset);

  std::vector<NodeId> ids{0, 1};
  std::vector<uint64_t> names = anonymize(ids, a);
  CHECK(names == std::vector<uint64_t>{a.offset, a.offset + 1});

  // names are distinct and invertible over a wide id range
  std::set<uint64_t> seen;
  for (NodeId u = 0; u < 100000; u += 997) {
    uint64_t name = a.name(u);
    CHECK(name - a.offset == u);
    CHECK(seen.insert(name).second);
  }
}

TEST_CASE("render_prompt: size template lists every field twice for one walk") {
  Anonymizer anon = make_anonymizer(4);
  WalkStats s = k2_stats(anon);
  PromptParams params;
  PromptArtifact p = render_prompt(Task::Size, std::vector<WalkStats>{s}, s, params);

  for (const char* label :
       {"walk length: ", "unique nodes: ", "unique edges: ", "first collision step: ",
        "first return to start step: ", "new nodes per decile:", "sampled node names:",
        "top 10 degrees:", "bottom 10 degrees:", "degree histogram:", "average degree: "})
    CHECK_MESSAGE(count_occurrences(p.text, label) == 2, label);

  CHECK(count_occurrences(p.text, "== Walk 1 statistics ==") == 1);
  CHECK(count_occurrences(p.text, "== Combined statistics (all walks) ==") == 1);
  CHECK(p.text.find("ANSWER: <number>") != std::string::npos);
  CHECK(p.token_estimate == estimate_tokens(p.text));
}

TEST_CASE("render_prompt: byte-identical across calls") {
  Anonymizer anon = make_anonymizer(4);
  WalkStats s = k2_stats(anon);
  PromptParams params;
  PromptArtifact a = render_prompt(Task::Size, std::vector<WalkStats>{s}, s, params);
  PromptArtifact b = render_prompt(Task::Size, std::vector<WalkStats>{s}, s, params);
  CHECK(a.text == b.text);
}

TEST_CASE("render_prompt: record variants show node records, not stat fields") {
  Anonymizer anon = make_anonymizer(4);
  WalkStats s = k2_stats(anon);
  PromptParams params;
  PromptArtifact p = render_prompt(Task::Structure, std::vector<WalkStats>{s}, s, params);
  CHECK(count_occurrences(p.text, "== Walk 1 node records ==") == 1);
  CHECK(count_occurrences(p.text, "== Combined node records ==") == 1);
  CHECK(p.text.find("new nodes per decile:") == std::string::npos);
  CHECK(p.text.find("node " + std::to_string(anon.name(0)) + ": visits 2, degree 1") !=
        std::string::npos);
  CHECK(p.text.find("ANSWER: <ba|er|lfr|grid>") != std::string::npos);

  PromptArtifact t = render_prompt(Task::TopK, std::vector<WalkStats>{s}, s, params);
  CHECK(t.text.find("ANSWER: <name, name, ...>") != std::string::npos);
  CHECK(t.text.find("pagerank") != std::string::npos);
  PromptArtifact c = render_prompt(Task::Community, std::vector<WalkStats>{s}, s, params);
  CHECK(c.text.find("ANSWER: <integer>") != std::string::npos);
}

TEST_CASE("render_prompt: no raw node ids leak into the text") {
  Graph g = oracle::random_connected_graph(40, 0.15, 33);
  LimitedGraphView view(g);
  Walk w = simple_random_walk(view, 0, 200, 0, 14);
  Anonymizer anon = make_anonymizer(21);
  WalkStats s = compute_walk_stats(w, anon);
  PromptParams params;
  PromptArtifact p = render_prompt(Task::Structure, std::vector<WalkStats>{s}, s, params);

  size_t pos = 0;
  while ((pos = p.text.find("node ", pos)) != std::string::npos) {
    pos += 5;
    if (!std::isdigit((unsigned char)p.text[pos])) continue;
    CHECK(std::stoull(p.text.substr(pos)) >= 1000000ULL);
  }
}

TEST_CASE("render_prompt: long degree histograms fold into a tail bucket") {
  Anonymizer anon = make_anonymizer(4);
  WalkStats s = k2_stats(anon);
  s.degree_histogram = {{1, 5}, {2, 7}, {3, 7}, {9, 1}};
  PromptParams params;
  params.histogram_max_rows = 2;
  PromptArtifact p = render_prompt(Task::Size, std::vector<WalkStats>{s}, s, params);
  CHECK(count_occurrences(p.text, "degree histogram: 2:7, 3:7, plus 6 nodes across 2 "
                                  "other degrees") == 2);
}

TEST_CASE("render_prompt: rejects empty stats and bad size targets") {
  Anonymizer anon = make_anonymizer(4);
  WalkStats s = k2_stats(anon);
  std::vector<WalkStats> none;
  CHECK_THROWS_AS(render_prompt(Task::Size, none, s, PromptParams{}), EmptyStatsError);
  PromptParams bad;
  bad.size_target = "degrees";
  CHECK_THROWS_AS(render_prompt(Task::Size, std::vector<WalkStats>{s}, s, bad), SpecError);
}

TEST_CASE("estimate_tokens: ceil of quarter of the byte count") {
  CHECK(estimate_tokens("") == 0);
  CHECK(estimate_tokens("abc") == 1);
  CHECK(estimate_tokens("abcdefgh") == 2);
  CHECK(estimate_tokens("abcdefghi") == 3);
}

TEST_CASE("prompt_to_json carries text and provenance") {
  Anonymizer anon = make_anonymizer(4);
  WalkStats s = k2_stats(anon);
  PromptParams params;
  params.graph_ref = "size-er-small-0000";
  params.walk_seeds = {10, 11};
  params.config = "task=size";
  PromptArtifact p = render_prompt(Task::Size, std::vector<WalkStats>{s}, s, params);
  auto j = nlohmann::json::parse(prompt_to_json(p));
  CHECK(j.at("task") == "size");
  CHECK(j.at("text") == p.text);
  CHECK(j.at("token_estimate") == p.token_estimate);
  CHECK(j.at("provenance").at("graph") == "size-er-small-0000");
  CHECK(j.at("provenance").at("walk_seeds") == std::vector<uint64_t>{10, 11});
  CHECK(j.at("provenance").at("config") == "task=size");
}

TEST_CASE("parse_answer: size takes the last ANSWER line") {
  CHECK(parse_answer(Task::Size, "reasoning...\nANSWER: 5000").number ==
        doctest::Approx(5000.0));
  CHECK(parse_answer(Task::Size, "ANSWER: 1\nmore\nANSWER: 2").number == doctest::Approx(2.0));
  CHECK(parse_answer(Task::Size, "answer: 370.5").number == doctest::Approx(370.5));
}

TEST_CASE("parse_answer: size falls back to the last number anywhere") {
  CHECK(parse_answer(Task::Size, "I count 12 then maybe 1234 nodes").number ==
        doctest::Approx(1234.0));
  CHECK_THROWS_AS(parse_answer(Task::Size, "no idea at all"), UnparsableError);
  CHECK_THROWS_AS(parse_answer(Task::Size, "ANSWER: minus ten, say -5"), UnparsableError);
}

TEST_CASE("parse_answer: community rounds to the nearest integer") {
  CHECK(parse_answer(Task::Community, "ANSWER: 7.6").integer == 8);
  CHECK(parse_answer(Task::Community, "roughly 12 groups").integer == 12);
}

TEST_CASE("parse_answer: structure labels are case-insensitive with aliases") {
  CHECK(parse_answer(Task::Structure, "ANSWER: ER").label == StructureLabel::ER);
  CHECK(parse_answer(Task::Structure, "the graph looks like er\nANSWER: ba").label ==
        StructureLabel::BA);
  CHECK(parse_answer(Task::Structure, "classic preferential attachment, no answer").label ==
        StructureLabel::BA);
  CHECK(parse_answer(Task::Structure, "probably a lattice").label == StructureLabel::Grid);
  CHECK_THROWS_AS(parse_answer(Task::Structure, "a total mystery"), UnparsableError);
}

TEST_CASE("parse_answer: topk collects names, falling back to the last numeric line") {
  ParsedAnswer a = parse_answer(Task::TopK, "ANSWER: 1000001, 1000002, 1000003");
  CHECK(a.names == std::vector<uint64_t>{1000001, 1000002, 1000003});
  ParsedAnswer b = parse_answer(Task::TopK, "try these\n5, 9, 12\nthanks");
  CHECK(b.names == std::vector<uint64_t>{5, 9, 12});
  CHECK_THROWS_AS(parse_answer(Task::TopK, "none come to mind"), UnparsableError);
}

TEST_CASE("task and label name round trips") {
  CHECK(task_name(Task::Size) == std::string("size"));
  CHECK(task_from_name("community") == Task::Community);
  CHECK(structure_label_name(StructureLabel::Grid) == std::string("grid"));
  CHECK(structure_label_from_name("lfr") == StructureLabel::LFR);
  CHECK_THROWS_AS(task_from_name("walks"), UnknownTaskError);
  CHECK_THROWS_AS(structure_label_from_name("tree"), SpecError);
}

#include "estgraph/promptgen.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "estgraph/errors.hpp"

namespace estgraph {

const char* task_name(Task t) {
  switch (t) {
    case Task::Size: return "size";
    case Task::Community: return "community";
    case Task::Structure: return "structure";
    case Task::TopK: return "topk";
  }
  return "?";
}

Task task_from_name(std::string_view name) {
  if (name == "size") return Task::Size;
  if (name == "community") return Task::Community;
  if (name == "structure") return Task::Structure;
  if (name == "topk") return Task::TopK;
  throw UnknownTaskError("unknown task: " + std::string(name));
}

const char* structure_label_name(StructureLabel l) {
  switch (l) {
    case StructureLabel::BA: return "ba";
    case StructureLabel::ER: return "er";
    case StructureLabel::LFR: return "lfr";
    case StructureLabel::Grid: return "grid";
  }
  return "?";
}

StructureLabel structure_label_from_name(std::string_view name) {
  if (name == "ba") return StructureLabel::BA;
  if (name == "er") return StructureLabel::ER;
  if (name == "lfr") return StructureLabel::LFR;
  if (name == "grid") return StructureLabel::Grid;
  throw SpecError("unknown structure label: " + std::string(name));
}

Anonymizer make_anonymizer(uint64_t seed) {
  Anonymizer a;
  a.seed = seed;
  Rng rng(mix_seed({seed, 0x616e6f6eULL}));
  a.offset = 1000000ULL + rng.below(1000000000ULL - 1000000ULL);
  return a;
}

std::vector<uint64_t> anonymize(std::span<const NodeId> nodes, const Anonymizer& a) {
  std::vector<uint64_t> out;
  out.reserve(nodes.size());
  for (NodeId u : nodes) out.push_back(a.name(u));
  return out;
}

namespace {

// shared accumulation for one walk or a pooled sequence of walks
WalkStats stats_from_sequences(std::span<const Walk> walks, const Anonymizer& a) {
  WalkStats s;
  std::unordered_map<NodeId, uint64_t> visits;
  std::unordered_map<NodeId, uint32_t> degree_of;
  std::set<std::pair<NodeId, NodeId>> edges;
  std::vector<NodeId> first_seen_order;

  uint64_t total_positions = 0;
  for (const Walk& w : walks) {
    if (w.steps.empty()) throw EmptyWalkError();
    s.walk_length += w.steps.size() - 1;
    total_positions += w.steps.size();
  }

  NodeId origin = walks[0].steps[0].first;
  uint64_t pos = 0;
  for (const Walk& w : walks) {
    for (size_t i = 0; i < w.steps.size(); ++i, ++pos) {
      auto [node, deg] = w.steps[i];
      auto [it, fresh] = visits.try_emplace(node, 0);
      ++it->second;
      if (fresh) {
        degree_of[node] = deg;
        first_seen_order.push_back(node);
        size_t decile = pos * 10 / total_positions;
        ++s.decile_new_nodes[decile];
      } else if (!s.first_collision_step && pos > 0) {
        s.first_collision_step = pos;
      }
      if (!s.first_return_step && pos > 0 && node == origin) s.first_return_step = pos;
      if (i > 0) {
        NodeId prev = w.steps[i - 1].first;
        if (prev != node) edges.emplace(std::min(prev, node), std::max(prev, node));
      }
    }
  }

  s.unique_nodes = visits.size();
  s.unique_edges = edges.size();

  std::map<uint32_t, uint64_t> hist;
  double dsum = 0;
  for (NodeId u : first_seen_order) {
    ++hist[degree_of[u]];
    dsum += degree_of[u];
  }
  s.degree_histogram.assign(hist.begin(), hist.end());
  s.avg_degree = dsum / (double)s.unique_nodes;

  std::vector<NodeId> uniq(first_seen_order);
  std::sort(uniq.begin(), uniq.end());
  for (NodeId u : uniq) s.node_records.emplace_back(a.name(u), visits[u], degree_of[u]);

  auto by_degree_desc = [&](NodeId x, NodeId y) {
    if (degree_of[x] != degree_of[y]) return degree_of[x] > degree_of[y];
    return x < y;
  };
  std::vector<NodeId> ranked(uniq);
  std::sort(ranked.begin(), ranked.end(), by_degree_desc);
  size_t take = std::min<size_t>(10, ranked.size());
  for (size_t i = 0; i < take; ++i)
    s.top10_degrees.emplace_back(a.name(ranked[i]), degree_of[ranked[i]]);
  for (size_t i = 0; i < take; ++i) {
    NodeId u = ranked[ranked.size() - 1 - i];
    s.bottom10_degrees.emplace_back(a.name(u), degree_of[u]);
  }

  uint64_t h = a.seed;
  for (const Walk& w : walks) h = mix_seed({h, w.seed});
  Rng rng(mix_seed({h, 0x73616d70ULL}));
  std::vector<NodeId> pool(uniq);
  size_t want = std::min<size_t>(20, pool.size());
  for (size_t i = 0; i < want; ++i) {  // partial Fisher-Yates
    size_t j = i + rng.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(want);
  s.sampled_names = anonymize(pool, a);
  std::sort(s.sampled_names.begin(), s.sampled_names.end());
  return s;
}

}  // namespace

WalkStats compute_walk_stats(const Walk& walk, const Anonymizer& a) {
  if (walk.steps.empty()) throw EmptyWalkError();
  return stats_from_sequences({&walk, 1}, a);
}

WalkStats combine_walk_stats(std::span<const Walk> walks, const Anonymizer& a) {
  if (walks.empty()) throw EmptyStatsError();
  return stats_from_sequences(walks, a);
}

uint64_t estimate_tokens(std::string_view text) { return (text.size() + 3) / 4; }

namespace {

void append_fmt(std::string& out, const char* fmt, ...) {
  char buf[256];
  va_list ap;
  va_start(ap, fmt);
  int k = vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  out.append(buf, (size_t)std::min<int>(k, sizeof buf - 1));
}

std::string opt_step(const std::optional<uint64_t>& v) {
  return v ? std::to_string(*v) : "none";
}

void render_stat_fields(std::string& out, const WalkStats& s, uint32_t hist_rows) {
  append_fmt(out, "walk length: %llu\n", (unsigned long long)s.walk_length);
  append_fmt(out, "unique nodes: %llu\n", (unsigned long long)s.unique_nodes);
  append_fmt(out, "unique edges: %llu\n", (unsigned long long)s.unique_edges);
  out += "first collision step: " + opt_step(s.first_collision_step) + "\n";
  out += "first return to start step: " + opt_step(s.first_return_step) + "\n";
  out += "new nodes per decile:";
  for (size_t i = 0; i < s.decile_new_nodes.size(); ++i)
    out += (i ? ", " : " ") + std::to_string(s.decile_new_nodes[i]);
  out += "\n";
  out += "sampled node names:";
  if (s.sampled_names.empty()) out += " none";
  for (size_t i = 0; i < s.sampled_names.size(); ++i)
    out += (i ? ", " : " ") + std::to_string(s.sampled_names[i]);
  out += "\n";
  out += "top 10 degrees:";
  for (size_t i = 0; i < s.top10_degrees.size(); ++i)
    out += (i ? ", " : " ") + std::to_string(s.top10_degrees[i].first) + ":" +
           std::to_string(s.top10_degrees[i].second);
  out += "\n";
  out += "bottom 10 degrees:";
  for (size_t i = 0; i < s.bottom10_degrees.size(); ++i)
    out += (i ? ", " : " ") + std::to_string(s.bottom10_degrees[i].first) + ":" +
           std::to_string(s.bottom10_degrees[i].second);
  out += "\n";

  // keep the most frequent degrees, print them in degree order, fold the
  // rest into one tail bucket
  std::vector<std::pair<uint32_t, uint64_t>> rows(s.degree_histogram);
  uint64_t tail_nodes = 0, tail_degrees = 0;
  if (rows.size() > hist_rows) {
    std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) {
      if (x.second != y.second) return x.second > y.second;
      return x.first < y.first;
    });
    for (size_t i = hist_rows; i < rows.size(); ++i) {
      tail_nodes += rows[i].second;
      ++tail_degrees;
    }
    rows.resize(hist_rows);
    std::sort(rows.begin(), rows.end());
  }
  out += "degree histogram:";
  for (size_t i = 0; i < rows.size(); ++i)
    out += (i ? ", " : " ") + std::to_string(rows[i].first) + ":" +
           std::to_string(rows[i].second);
  if (tail_degrees)
    append_fmt(out, ", plus %llu nodes across %llu other degrees",
               (unsigned long long)tail_nodes, (unsigned long long)tail_degrees);
  out += "\n";
  append_fmt(out, "average degree: %.2f\n", s.avg_degree);
}

void render_node_records(std::string& out, const WalkStats& s) {
  for (const auto& [name, visits, degree] : s.node_records)
    append_fmt(out, "node %llu: visits %llu, degree %u\n", (unsigned long long)name,
               (unsigned long long)visits, degree);
}

}  // namespace

PromptArtifact render_prompt(Task task, std::span<const WalkStats> walks,
                             const WalkStats& combined, const PromptParams& params) {
  if (walks.empty()) throw EmptyStatsError();
  if (params.size_target != "nodes" && params.size_target != "edges")
    throw SpecError("size_target must be nodes or edges");

  std::string t;
  append_fmt(t,
             "You are analyzing an unknown undirected graph. It was explored with %zu "
             "random walk(s). Only the observations below are available.\n\n",
             walks.size());

  bool records = task != Task::Size;
  for (size_t i = 0; i < walks.size(); ++i) {
    append_fmt(t, "== Walk %zu %s ==\n", i + 1, records ? "node records" : "statistics");
    if (records)
      render_node_records(t, walks[i]);
    else
      render_stat_fields(t, walks[i], params.histogram_max_rows);
    t += "\n";
  }
  t += records ? "== Combined node records ==\n" : "== Combined statistics (all walks) ==\n";
  if (records)
    render_node_records(t, combined);
  else
    render_stat_fields(t, combined, params.histogram_max_rows);
  t += "\n";

  switch (task) {
    case Task::Size:
      append_fmt(t, "Task: estimate the total number of %s in the graph.\n",
                 params.size_target.c_str());
      t += "Give your reasoning, then end with one line formatted exactly as:\n"
           "ANSWER: <number>\n";
      break;
    case Task::Community:
      t += "Task: estimate the number of communities in the graph.\n";
      t += "Give your reasoning, then end with one line formatted exactly as:\n"
           "ANSWER: <integer>\n";
      break;
    case Task::Structure:
      t += "Task: decide which graph model the structure most resembles: "
           "ba (preferential attachment), er (uniform random), "
           "lfr (planted communities), or grid (regular lattice).\n";
      t += "Give your reasoning, then end with one line formatted exactly as:\n"
           "ANSWER: <ba|er|lfr|grid>\n";
      break;
    case Task::TopK:
      append_fmt(t,
                 "Task: list the %u nodes most likely to have the highest %s "
                 "centrality, best first.\n",
                 params.k, params.measure.c_str());
      t += "Give your reasoning, then end with one line formatted exactly as:\n"
           "ANSWER: <name, name, ...>\n";
      break;
  }

  PromptArtifact p;
  p.task = task;
  p.text = std::move(t);
  p.token_estimate = estimate_tokens(p.text);
  p.graph_ref = params.graph_ref;
  p.walk_seeds = params.walk_seeds;
  p.config = params.config;
  return p;
}

std::string prompt_to_json(const PromptArtifact& p) {
  nlohmann::json j;
  j["task"] = task_name(p.task);
  j["text"] = p.text;
  j["token_estimate"] = p.token_estimate;
  j["provenance"]["graph"] = p.graph_ref;
  j["provenance"]["walk_seeds"] = p.walk_seeds;
  j["provenance"]["config"] = p.config;
  return j.dump();
}

// --- answer parsing --------------------------------------------------------

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = (char)std::tolower((unsigned char)c);
  return s;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// last "ANSWER:" payload in the text, if any
std::optional<std::string> answer_line(const std::string& text) {
  std::optional<std::string> found;
  size_t pos = 0;
  std::string low = lower(text);
  while ((pos = low.find("answer:", pos)) != std::string::npos) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    found = trim(text.substr(pos + 7, eol - pos - 7));
    pos = eol;
  }
  return found;
}

std::optional<double> last_number(const std::string& s) {
  std::optional<double> out;
  const char* p = s.c_str();
  const char* end = p + s.size();
  while (p < end) {
    if (std::isdigit((unsigned char)*p) ||
        (*p == '-' && p + 1 < end && std::isdigit((unsigned char)p[1]))) {
      char* q = nullptr;
      double v = std::strtod(p, &q);
      if (q > p) {
        out = v;
        p = q;
        continue;
      }
    }
    ++p;
  }
  return out;
}

std::vector<uint64_t> all_integers(const std::string& s) {
  std::vector<uint64_t> out;
  const char* p = s.c_str();
  const char* end = p + s.size();
  while (p < end) {
    if (std::isdigit((unsigned char)*p)) {
      char* q = nullptr;
      unsigned long long v = std::strtoull(p, &q, 10);
      out.push_back(v);
      p = q;
    } else {
      ++p;
    }
  }
  return out;
}

std::optional<StructureLabel> find_label(const std::string& raw) {
  std::string s = lower(raw);
  // scan for the last mention of any label or a common alias
  struct Alias {
    const char* word;
    StructureLabel label;
  };
  static const Alias aliases[] = {
      {"barabasi", StructureLabel::BA},   {"preferential", StructureLabel::BA},
      {"erdos", StructureLabel::ER},      {"lattice", StructureLabel::Grid},
      {"hypercube", StructureLabel::Grid},
  };
  std::optional<StructureLabel> best;
  size_t best_pos = 0;
  auto consider = [&](size_t pos, StructureLabel l) {
    if (!best || pos >= best_pos) {
      best = l;
      best_pos = pos;
    }
  };
  // whole words only for the short names
  for (StructureLabel l :
       {StructureLabel::BA, StructureLabel::ER, StructureLabel::LFR, StructureLabel::Grid}) {
    std::string w = structure_label_name(l);
    size_t pos = 0;
    while ((pos = s.find(w, pos)) != std::string::npos) {
      bool left = pos == 0 || !std::isalnum((unsigned char)s[pos - 1]);
      size_t after = pos + w.size();
      bool right = after >= s.size() || !std::isalnum((unsigned char)s[after]);
      if (left && right) consider(pos, l);
      pos = after;
    }
  }
  for (const Alias& al : aliases) {
    size_t pos = s.rfind(al.word);
    if (pos != std::string::npos) consider(pos, al.label);
  }
  return best;
}

}  // namespace

ParsedAnswer parse_answer(Task task, const std::string& response) {
  ParsedAnswer out;
  out.task = task;
  std::optional<std::string> ans = answer_line(response);

  switch (task) {
    case Task::Size: {
      std::optional<double> v;
      if (ans) v = last_number(*ans);
      if (!v) v = last_number(response);
      if (!v || !std::isfinite(*v) || *v < 0) throw UnparsableError();
      out.number = *v;
      return out;
    }
    case Task::Community: {
      std::optional<double> v;
      if (ans) v = last_number(*ans);
      if (!v) v = last_number(response);
      if (!v || !std::isfinite(*v) || *v < 0) throw UnparsableError();
      out.integer = (int64_t)std::llround(*v);
      return out;
    }
    case Task::Structure: {
      std::optional<StructureLabel> l;
      if (ans) l = find_label(*ans);
      if (!l) l = find_label(response);
      if (!l) throw UnparsableError();
      out.label = *l;
      return out;
    }
    case Task::TopK: {
      std::vector<uint64_t> names;
      if (ans) names = all_integers(*ans);
      if (names.empty()) {
        // fallback: integers on the last line that has any
        size_t end = response.size();
        while (end > 0) {
          size_t start = response.rfind('\n', end - 1);
          size_t b = start == std::string::npos ? 0 : start + 1;
          names = all_integers(response.substr(b, end - b));
          if (!names.empty()) break;
          if (start == std::string::npos) break;
          end = start;
        }
      }
      if (names.empty()) throw UnparsableError();
      out.names = std::move(names);
      return out;
    }
  }
  throw UnknownTaskError();
}

}  // namespace estgraph

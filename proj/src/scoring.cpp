#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include "estgraph/errors.hpp"
#include "estgraph/harness.hpp"

namespace estgraph {

double relative_error_pct(double estimate, double truth) {
  if (truth == 0) throw SpecError("relative error needs a nonzero truth");
  return 100.0 * std::abs(estimate - truth) / std::abs(truth);
}

namespace {

constexpr double kErrorCapPct = 10000.0;

bool lower_is_better(const std::string& metric) {
  return metric == "rel_err_pct" || metric == "edge_rel_err_pct" || metric == "mae";
}

bool capped_metric(const std::string& metric) {
  return metric == "rel_err_pct" || metric == "edge_rel_err_pct";
}

struct Stats {
  double median = 0, mean = 0, stddev = 0;
};

Stats summarize(std::vector<double> xs) {
  Stats s;
  if (xs.empty()) return s;
  std::sort(xs.begin(), xs.end());
  size_t n = xs.size();
  s.median = n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
  double sum = 0, sq = 0;
  for (double x : xs) {
    sum += x;
    sq += x * x;
  }
  s.mean = sum / n;
  s.stddev = std::sqrt(std::max(0.0, sq / n - s.mean * s.mean));
  return s;
}

// graph ids are "<task>-<family>-<size_class>-<index>" with the class
// segment absent for single-cell tasks
void split_graph_id(const std::string& id, std::string& family, std::string& size_class) {
  std::vector<std::string> parts;
  size_t pos = 0;
  while (pos <= id.size()) {
    size_t dash = id.find('-', pos);
    if (dash == std::string::npos) dash = id.size();
    parts.push_back(id.substr(pos, dash - pos));
    pos = dash + 1;
  }
  family = parts.size() > 1 ? parts[1] : "";
  size_class = parts.size() > 3 ? parts[2] : "";
}

double topk_precision(const nlohmann::json& estimate, const nlohmann::json& truth) {
  std::vector<uint64_t> pred = estimate.at("topk").get<std::vector<uint64_t>>();
  std::vector<uint64_t> want = truth.at("topk").get<std::vector<uint64_t>>();
  uint64_t k = estimate.at("k").get<uint64_t>();
  size_t kt = std::min<size_t>(k, want.size());
  if (kt == 0) throw EmptySampleError("empty truth ranking");
  std::set<uint64_t> w(want.begin(), want.begin() + kt);
  uint64_t hit = 0;
  size_t kp = std::min(pred.size(), kt);
  for (size_t i = 0; i < kp; ++i) hit += w.count(pred[i]);
  return (double)hit / (double)kt;
}

struct CellKey {
  std::string task, family, size_class, method, metric;
  bool operator<(const CellKey& o) const {
    return std::tie(task, family, size_class, metric, method) <
           std::tie(o.task, o.family, o.size_class, o.metric, o.method);
  }
};

struct CellAgg {
  std::vector<double> values;  // one per ok record carrying the metric
  uint64_t failed = 0, unparsed = 0;
};

}  // namespace

ScoreTable score(std::span<const ExperimentRecord> records) {
  std::map<CellKey, CellAgg> cells;

  auto bump = [&](const ExperimentRecord& r, const std::string& metric,
                  std::optional<double> value) {
    std::string family, size_class;
    split_graph_id(r.graph_id, family, size_class);
    CellAgg& agg = cells[{r.task, family, size_class, r.method, metric}];
    if (value) agg.values.push_back(*value);
    else if (r.status == "unparsed") ++agg.unparsed;
    else ++agg.failed;
  };

  // The edge metric only applies to methods that actually produce an edge
  // estimate (agents answer with a single number). A failed record carries
  // no payload, so methods whose ok records have edges get their failures
  // counted there too; methods with no ok records at all default to
  // counting, which keeps all-failed classical runs visible.
  std::set<std::string> edge_methods, ok_methods;
  for (const ExperimentRecord& r : records) {
    if (r.task != "size" || r.status != "ok") continue;
    ok_methods.insert(r.method);
    if (r.estimate.contains("edges")) edge_methods.insert(r.method);
  }

  for (const ExperimentRecord& r : records) {
    bool ok = r.status == "ok";
    if (r.task == "size") {
      bump(r, "rel_err_pct",
           ok ? std::optional(relative_error_pct(r.estimate.at("nodes").get<double>(),
                                                 r.truth.at("nodes").get<double>()))
              : std::nullopt);
      bool edge_row = ok ? r.estimate.contains("edges")
                         : edge_methods.count(r.method) || !ok_methods.count(r.method);
      if (edge_row)
        bump(r, "edge_rel_err_pct",
             ok ? std::optional(relative_error_pct(r.estimate.at("edges").get<double>(),
                                                   r.truth.at("edges").get<double>()))
                : std::nullopt);
    } else if (r.task == "community") {
      bump(r, "mae",
           ok ? std::optional(std::abs(r.estimate.at("communities").get<double>() -
                                       r.truth.at("communities").get<double>()))
              : std::nullopt);
    } else if (r.task == "structure") {
      bump(r, "accuracy",
           ok ? std::optional(r.estimate.at("label") == r.truth.at("label") ? 1.0 : 0.0)
              : std::nullopt);
    } else if (r.task == "topk") {
      bump(r, "precision_at_k", ok ? std::optional(topk_precision(r.estimate, r.truth))
                                   : std::nullopt);
    } else {
      throw UnknownTaskError("cannot score task " + r.task);
    }
  }

  ScoreTable table;
  for (auto& [key, agg] : cells) {
    ScoreRow row;
    row.task = key.task;
    row.family = key.family;
    row.size_class = key.size_class;
    row.method = key.method;
    row.metric = key.metric;
    row.ok = agg.values.size();
    row.failed = agg.failed;
    row.unparsed = agg.unparsed;
    if (row.ok > 0) {
      Stats raw = summarize(agg.values);
      row.raw_median = raw.median;
      row.raw_mean = raw.mean;
      row.raw_stddev = raw.stddev;
      if (capped_metric(key.metric)) {
        for (double& v : agg.values) v = std::min(v, kErrorCapPct);
        raw = summarize(agg.values);
      }
      row.median = raw.median;
      row.mean = raw.mean;
      row.stddev = raw.stddev;
    }
    table.rows.push_back(std::move(row));
  }

  // rank methods inside each (task, family, size_class, metric) cell
  std::map<std::tuple<std::string, std::string, std::string, std::string>,
           std::vector<ScoreRow*>>
      groups;
  for (ScoreRow& row : table.rows)
    if (row.ok > 0)
      groups[{row.task, row.family, row.size_class, row.metric}].push_back(&row);
  for (auto& [key, rows] : groups) {
    bool asc = lower_is_better(rows.front()->metric);
    std::sort(rows.begin(), rows.end(), [asc](const ScoreRow* a, const ScoreRow* b) {
      if (a->median != b->median) return asc ? a->median < b->median : a->median > b->median;
      return a->method < b->method;
    });
    for (size_t i = 0; i < rows.size(); ++i) rows[i]->rank = (uint32_t)(i + 1);
  }

  return table;  // map iteration already yields the sorted row order
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::string table_to_csv(const ScoreTable& t) {
  std::string out =
      "task,family,size_class,method,metric,ok,failed,unparsed,median,mean,stddev,rank\n";
  for (const ScoreRow& r : t.rows) {
    out += r.task + "," + r.family + "," + r.size_class + "," + r.method + "," + r.metric +
           "," + std::to_string(r.ok) + "," + std::to_string(r.failed) + "," +
           std::to_string(r.unparsed) + ",";
    if (r.ok > 0)
      out += fmt_double(r.median) + "," + fmt_double(r.mean) + "," + fmt_double(r.stddev);
    else
      out += ",,";
    out += "," + std::to_string(r.rank) + "\n";
  }
  return out;
}

std::string table_to_json(const ScoreTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ScoreRow& r : t.rows) {
    nlohmann::json j;
    j["task"] = r.task;
    j["family"] = r.family;
    j["size_class"] = r.size_class;
    j["method"] = r.method;
    j["metric"] = r.metric;
    j["ok"] = r.ok;
    j["failed"] = r.failed;
    j["unparsed"] = r.unparsed;
    j["median"] = r.median;
    j["mean"] = r.mean;
    j["stddev"] = r.stddev;
    j["raw_median"] = r.raw_median;
    j["raw_mean"] = r.raw_mean;
    j["raw_stddev"] = r.raw_stddev;
    j["rank"] = r.rank;
    rows.push_back(std::move(j));
  }
  return nlohmann::json{{"rows", rows}}.dump(2) + "\n";
}

ScoreTable table_from_json(const std::string& text) {
  try {
    auto j = nlohmann::json::parse(text);
    ScoreTable t;
    for (const auto& e : j.at("rows")) {
      ScoreRow r;
      r.task = e.at("task").get<std::string>();
      r.family = e.at("family").get<std::string>();
      r.size_class = e.at("size_class").get<std::string>();
      r.method = e.at("method").get<std::string>();
      r.metric = e.at("metric").get<std::string>();
      r.ok = e.at("ok").get<uint64_t>();
      r.failed = e.at("failed").get<uint64_t>();
      r.unparsed = e.at("unparsed").get<uint64_t>();
      r.median = e.at("median").get<double>();
      r.mean = e.at("mean").get<double>();
      r.stddev = e.at("stddev").get<double>();
      r.raw_median = e.at("raw_median").get<double>();
      r.raw_mean = e.at("raw_mean").get<double>();
      r.raw_stddev = e.at("raw_stddev").get<double>();
      r.rank = e.at("rank").get<uint32_t>();
      t.rows.push_back(std::move(r));
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("bad score table: ") + e.what());
  }
}

void emit(const ScoreTable& t, const std::string& csv_path, const std::string& json_path) {
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw IoError("cannot write " + csv_path);
  csv << table_to_csv(t);
  std::ofstream js(json_path, std::ios::binary);
  if (!js) throw IoError("cannot write " + json_path);
  js << table_to_json(t);
}

}  // namespace estgraph

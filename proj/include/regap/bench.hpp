#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "regap/generator.hpp"
#include "regap/pipeline.hpp"

namespace regap {

// Timing columns sit at the end of every row so determinism checks can chop
// them off and compare the rest byte for byte.

struct BenchRow {
  std::string instance;
  int graph_nodes = 0, graph_edges = 0, pattern_nodes = 0, wildcards = 0;
  std::string merge = "off";  // on | off | not-applied
  int nodes_encoded = 0;      // after contraction
  int k = 0;
  int vars = 0;
  long long clauses_base = 0;  // encoding the graph as given, no contraction
  long long clauses = 0;
  std::string status;
  long long conflicts = 0, decisions = 0;
  double encode_ms = 0, solve_ms = 0, total_ms = 0;
};

inline constexpr int kBenchTimingColumns = 3;

inline std::string bench_csv_header() {
  return "instance,graph_nodes,graph_edges,pattern_nodes,wildcards,merge,"
         "nodes_encoded,k,vars,clauses_base,clauses,status,conflicts,decisions,"
         "encode_ms,solve_ms,total_ms";
}

inline std::string to_csv(const BenchRow& r) {
  char tail[96];
  std::snprintf(tail, sizeof tail, "%.3f,%.3f,%.3f", r.encode_ms, r.solve_ms, r.total_ms);
  std::string out = r.instance;
  for (int v : {r.graph_nodes, r.graph_edges, r.pattern_nodes, r.wildcards})
    out += "," + std::to_string(v);
  out += "," + r.merge;
  for (long long v : {static_cast<long long>(r.nodes_encoded), static_cast<long long>(r.k),
                      static_cast<long long>(r.vars), r.clauses_base, r.clauses})
    out += "," + std::to_string(v);
  out += "," + r.status;
  out += "," + std::to_string(r.conflicts) + "," + std::to_string(r.decisions);
  out += ",";
  out += tail;
  return out;
}

inline json to_json(const BenchRow& r) {
  return json{{"instance", r.instance},
              {"graph_nodes", r.graph_nodes},
              {"graph_edges", r.graph_edges},
              {"pattern_nodes", r.pattern_nodes},
              {"wildcards", r.wildcards},
              {"merge", r.merge},
              {"nodes_encoded", r.nodes_encoded},
              {"k", r.k},
              {"vars", r.vars},
              {"clauses_base", r.clauses_base},
              {"clauses", r.clauses},
              {"status", r.status},
              {"conflicts", r.conflicts},
              {"decisions", r.decisions},
              {"encode_ms", r.encode_ms},
              {"solve_ms", r.solve_ms},
              {"total_ms", r.total_ms}};
}

// JSON-lines: one compact object per row, no enclosing array.
inline std::string to_jsonl(const std::vector<BenchRow>& rows) {
  std::string out;
  for (const auto& r : rows) out += to_json(r).dump() + "\n";
  return out;
}

inline std::string to_csv(const std::vector<BenchRow>& rows) {
  std::string out = bench_csv_header() + "\n";
  for (const auto& r : rows) out += to_csv(r) + "\n";
  return out;
}

// Drops the trailing timing fields from every line, header included.
inline std::string strip_timings(const std::string& csv) {
  std::string out;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t eol = csv.find('\n', pos);
    if (eol == std::string::npos) eol = csv.size();
    std::string_view line(csv.data() + pos, eol - pos);
    std::size_t cut = line.size();
    for (int i = 0; i < kBenchTimingColumns && cut != std::string_view::npos; ++i)
      cut = line.rfind(',', cut == line.size() ? std::string_view::npos : cut - 1);
    out.append(line.substr(0, cut == std::string_view::npos ? line.size() : cut));
    out += '\n';
    pos = eol + 1;
  }
  return out;
}

inline BenchRow bench_one(std::string label, const Pattern& p, const Graph& g,
                          const MatchOptions& opt = {}) {
  using clock = std::chrono::steady_clock;
  auto ms = [](clock::duration d) {
    return std::chrono::duration<double, std::milli>(d).count();
  };

  BenchRow row;
  row.instance = std::move(label);
  row.graph_nodes = g.n();
  row.graph_edges = g.m();
  row.pattern_nodes = p.n();
  for (auto k : p.kinds) row.wildcards += k != NodeKind::Concrete;

  auto t0 = clock::now();
  Graph enc_g = g;
  MergeReport mrep;
  if (opt.merge) {
    auto pr = merge_fixpoint(std::move(enc_g), p);
    enc_g = std::move(pr.first);
    mrep = std::move(pr.second);
  }
  EncodeOptions eo;
  eo.k = opt.k;
  EncodeResult enc = encode(p, enc_g, eo);
  auto t1 = clock::now();

  row.merge = !opt.merge ? "off" : mrep.applied ? "on" : "not-applied";
  row.nodes_encoded = enc_g.n();
  row.k = enc.k;
  row.vars = enc.cnf.num_vars;
  row.clauses = static_cast<long long>(enc.cnf.clauses.size());
  row.clauses_base = row.clauses;
  // Re-encode the uncontracted graph (untimed) so the row carries both sizes.
  if (opt.merge && mrep.applied && mrep.nodes_after != mrep.nodes_before)
    row.clauses_base = static_cast<long long>(encode(p, g, eo).cnf.clauses.size());

  SolveBudget budget;
  budget.max_millis = opt.timeout_ms;
  SolveResult sr = opt.external_solver.empty() ? solve(enc.cnf, budget, opt.seed)
                                               : solve_external(opt.external_solver, enc.cnf);
  auto t2 = clock::now();

  if (sr.status == SolveStatus::Sat)
    row.status = "MATCH";
  else if (sr.status == SolveStatus::Unsat && !enc.k_incomplete)
    row.status = "NO-MATCH";
  else
    row.status = "UNKNOWN";
  row.conflicts = sr.stats.conflicts;
  row.decisions = sr.stats.decisions;
  row.encode_ms = ms(t1 - t0);
  row.solve_ms = ms(t2 - t1);
  row.total_ms = ms(t2 - t0);
  return row;
}

// Corpus sweep: every generated graph against one query per wildcard count.
inline std::vector<BenchRow> bench_corpus(int graphs, int max_wildcards,
                                          const GenOptions& base = {},
                                          const MatchOptions& opt = {}) {
  std::vector<BenchRow> rows;
  for (int i = 0; i < graphs; ++i) {
    GenOptions go = base;
    go.seed = base.seed + static_cast<std::uint64_t>(i);
    Graph g = gen_cfg(go);
    for (int w = 0; w <= max_wildcards; ++w) {
      Pattern q = gen_query(go.seed * 31 + static_cast<std::uint64_t>(w), w);
      rows.push_back(bench_one("g" + std::to_string(i) + "w" + std::to_string(w), q, g, opt));
    }
  }
  return rows;
}

struct BenchSummary {
  int wildcards = 0;
  int instances = 0, matches = 0, unknowns = 0;
  double mean_vars = 0, mean_clauses = 0, mean_solve_ms = 0, mean_total_ms = 0;
};

inline std::vector<BenchSummary> summarize(const std::vector<BenchRow>& rows) {
  std::map<int, BenchSummary> by_w;
  for (const auto& r : rows) {
    BenchSummary& s = by_w[r.wildcards];
    s.wildcards = r.wildcards;
    ++s.instances;
    s.matches += r.status == "MATCH";
    s.unknowns += r.status == "UNKNOWN";
    s.mean_vars += r.vars;
    s.mean_clauses += static_cast<double>(r.clauses);
    s.mean_solve_ms += r.solve_ms;
    s.mean_total_ms += r.total_ms;
  }
  std::vector<BenchSummary> out;
  for (auto& [w, s] : by_w) {
    s.mean_vars /= s.instances;
    s.mean_clauses /= s.instances;
    s.mean_solve_ms /= s.instances;
    s.mean_total_ms /= s.instances;
    out.push_back(s);
  }
  return out;
}

inline std::string to_csv(const std::vector<BenchSummary>& sums) {
  std::string out = "wildcards,instances,matches,unknowns,mean_vars,mean_clauses,"
                    "mean_solve_ms,mean_total_ms\n";
  for (const auto& s : sums) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%.1f,%.1f,%.3f,%.3f\n", s.wildcards,
                  s.instances, s.matches, s.unknowns, s.mean_vars, s.mean_clauses,
                  s.mean_solve_ms, s.mean_total_ms);
    out += buf;
  }
  return out;
}

// Size distribution across the whole run, one row per metric.
struct BenchAggregate {
  std::string metric;
  double min = 0, max = 0, median = 0, mean = 0;
};

inline std::vector<BenchAggregate> aggregate(const std::vector<BenchRow>& rows) {
  auto stat = [&rows](const char* name, auto get) {
    BenchAggregate a;
    a.metric = name;
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto& r : rows) v.push_back(static_cast<double>(get(r)));
    if (v.empty()) return a;
    std::sort(v.begin(), v.end());
    a.min = v.front();
    a.max = v.back();
    std::size_t h = v.size() / 2;
    a.median = v.size() % 2 ? v[h] : (v[h - 1] + v[h]) / 2.0;
    for (double x : v) a.mean += x;
    a.mean /= static_cast<double>(v.size());
    return a;
  };
  return {stat("graph_nodes", [](const BenchRow& r) { return r.graph_nodes; }),
          stat("graph_edges", [](const BenchRow& r) { return r.graph_edges; }),
          stat("nodes_encoded", [](const BenchRow& r) { return r.nodes_encoded; }),
          stat("vars", [](const BenchRow& r) { return r.vars; }),
          stat("clauses_base", [](const BenchRow& r) { return r.clauses_base; }),
          stat("clauses", [](const BenchRow& r) { return r.clauses; })};
}

inline std::string to_csv(const std::vector<BenchAggregate>& aggs) {
  std::string out = "metric,min,max,median,mean\n";
  for (const auto& a : aggs) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s,%.0f,%.0f,%.1f,%.1f\n", a.metric.c_str(), a.min, a.max,
                  a.median, a.mean);
    out += buf;
  }
  return out;
}

}  // namespace regap

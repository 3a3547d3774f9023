#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "regap/bench.hpp"
#include "regap/oracle.hpp"
#include "regap/pipeline.hpp"

using namespace regap;

namespace {

constexpr int kExitMatch = 0, kExitNoMatch = 1, kExitUnknown = 2;
constexpr int kExitUsage = 64, kExitData = 65, kExitNoInput = 66, kExitSoftware = 70;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "regap: cannot open " << path << "\n";
    std::exit(kExitNoInput);
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    std::cerr << "regap: " << path << ": " << e.what() << "\n";
    std::exit(kExitData);
  }
}

Pattern load_pattern(const std::string& path) {
  try {
    return Pattern::from_json(load_json(path));
  } catch (const ParseError& e) {
    std::cerr << "regap: " << path << ": " << e.what() << "\n";
    std::exit(kExitData);
  }
}

Graph load_graph(const std::string& path) {
  try {
    return Graph::from_json(load_json(path));
  } catch (const ParseError& e) {
    std::cerr << "regap: " << path << ": " << e.what() << "\n";
    std::exit(kExitData);
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) {
    std::cerr << "regap: cannot write " << path << "\n";
    std::exit(kExitNoInput);
  }
  out << content;
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-")
    std::cout << content;
  else
    write_file(path, content);
}

struct CommonFlags {
  std::string merge = "on";
  int k = 0;
  bool iter_k = false;
  double timeout_s = 60.0;
  std::string solver = "builtin";
  std::uint64_t seed = 0;

  void attach(CLI::App* cmd, bool with_solve_flags = true) {
    cmd->add_option("--merge", merge, "run the contraction preprocessor (on|off)")
        ->check(CLI::IsMember({"on", "off"}));
    cmd->add_option("--k", k, "expansion depth (default: derived from the graph)")
        ->check(CLI::PositiveNumber);
    if (with_solve_flags) {
      cmd->add_flag("--iter-k", iter_k, "grow the depth 1,2,4,... instead of jumping to full");
      cmd->add_option("--timeout", timeout_s, "wall budget in seconds, negative disables")
          ->capture_default_str();
      cmd->add_option("--solver", solver, "builtin or external:PATH");
      cmd->add_option("--seed", seed, "decision seed for the builtin solver");
    }
  }

  MatchOptions to_match_options() const {
    MatchOptions o;
    o.merge = merge == "on";
    o.k = k;
    o.iterate_k = iter_k;
    o.timeout_ms = timeout_s < 0 ? -1 : static_cast<long long>(timeout_s * 1000.0);
    o.seed = seed;
    if (solver != "builtin") {
      if (solver.rfind("external:", 0) != 0 || solver.size() <= 9) {
        std::cerr << "regap: --solver expects 'builtin' or 'external:PATH'\n";
        std::exit(kExitUsage);
      }
      o.external_solver = solver.substr(9);
    }
    return o;
  }
};

int run_match(const std::string& ppath, const std::string& gpath, const CommonFlags& flags,
              bool want_witness, bool as_json) {
  Pattern p = load_pattern(ppath);
  Graph g = load_graph(gpath);
  MatchResult r = match(p, g, flags.to_match_options());

  if (as_json) {
    json out{{"status", to_string(r.status)},
             {"k", r.k_used},
             {"k_incomplete", r.k_incomplete},
             {"attempts", r.attempts},
             {"merge", r.merge_report.to_json()},
             {"conflicts", r.stats.conflicts},
             {"decisions", r.stats.decisions}};
    if (!r.note.empty()) out["note"] = r.note;
    if (r.status == MatchStatus::Match) out["witness"] = r.witness.to_json(p, r.graph);
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << to_string(r.status);
    if (r.status == MatchStatus::Unknown && !r.note.empty()) std::cout << " (" << r.note << ")";
    std::cout << "\n";
    if (want_witness && r.status == MatchStatus::Match)
      std::cout << r.witness.to_json(p, r.graph).dump(2) << "\n";
  }
  switch (r.status) {
    case MatchStatus::Match: return kExitMatch;
    case MatchStatus::NoMatch: return kExitNoMatch;
    default: return kExitUnknown;
  }
}

int run_encode(const std::string& ppath, const std::string& gpath, const CommonFlags& flags,
               const std::string& out, const std::string& map_out, const std::string& exp_out) {
  Pattern p = load_pattern(ppath);
  Graph g = load_graph(gpath);
  if (flags.merge == "on") g = merge_fixpoint(std::move(g), p).first;
  EncodeOptions eo;
  eo.k = flags.k;
  EncodeResult enc = encode(p, g, eo);
  emit(out, to_dimacs(enc.cnf));
  if (!map_out.empty()) emit(map_out, enc.var_map(g).dump(2) + "\n");
  if (!exp_out.empty()) emit(exp_out, enc.ep.to_json(g).dump(2) + "\n");
  if (enc.k_incomplete)
    std::cerr << "regap: depth " << enc.k << " is below the complete bound; "
              << "unsat will not be a verdict\n";
  return 0;
}

int run_merge(const std::string& ppath, const std::string& gpath, const std::string& out,
              const std::string& report_out) {
  Pattern p = load_pattern(ppath);
  Graph g = load_graph(gpath);
  auto [merged, report] = merge_fixpoint(std::move(g), p);
  emit(out, merged.to_json().dump(2) + "\n");
  if (!report_out.empty()) emit(report_out, report.to_json().dump(2) + "\n");
  return 0;
}

int run_oracle(const std::string& ppath, const std::string& gpath, const std::string& engine,
               std::size_t max_candidates, std::size_t max_states, bool want_witness) {
  Pattern p = load_pattern(ppath);
  Graph g = load_graph(gpath);
  OracleOptions opt;
  opt.max_candidates = max_candidates;
  opt.max_states = max_states;
  OracleResult r = engine == "rules" ? derive_by_rules(p, g, opt) : oracle_match(p, g, opt);
  switch (r.status) {
    case OracleStatus::Yes:
      std::cout << "MATCH\n";
      if (want_witness) std::cout << r.witness.to_json(p, g).dump(2) << "\n";
      return kExitMatch;
    case OracleStatus::No:
      std::cout << "NO-MATCH\n";
      return kExitNoMatch;
    default:
      std::cout << "UNKNOWN (" << r.note << ")\n";
      return kExitUnknown;
  }
}

int run_gen(int count, std::uint64_t seed, int target_nodes, const std::string& out,
            const std::string& dir, int query_wildcards) {
  if (query_wildcards >= 0) {
    emit(out, gen_query(seed, query_wildcards).to_json().dump(2) + "\n");
    return 0;
  }
  GenOptions base;
  base.seed = seed;
  base.target_nodes = target_nodes;
  if (!dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
      std::cerr << "regap: cannot create " << dir << ": " << ec.message() << "\n";
      return kExitNoInput;
    }
    auto corpus = gen_corpus(count, base);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      char name[24];
      std::snprintf(name, sizeof name, "g%04zu.json", i);
      write_file(dir + "/" + name, corpus[i].to_json().dump(2) + "\n");
    }
    return 0;
  }
  if (count == 1) {
    emit(out, gen_cfg(base).to_json().dump(2) + "\n");
    return 0;
  }
  json arr = json::array();
  for (const Graph& g : gen_corpus(count, base)) arr.push_back(g.to_json());
  emit(out, arr.dump(2) + "\n");
  return 0;
}

int run_bench(int graphs, int max_wildcards, std::uint64_t seed, const CommonFlags& flags,
              bool summary, bool jsonl, const std::string& out) {
  GenOptions base;
  base.seed = seed;
  MatchOptions mo = flags.to_match_options();
  auto rows = bench_corpus(graphs, max_wildcards, base, mo);
  if (summary)
    emit(out, to_csv(aggregate(rows)) + "\n" + to_csv(summarize(rows)));
  else
    emit(out, jsonl ? to_jsonl(rows) : to_csv(rows));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ReGaP: wildcard pattern matching on attributed directed graphs"};
  app.require_subcommand(1);

  std::string ppath, gpath, out, map_out, exp_out, report_out, dir;
  bool want_witness = false, as_json = false, summary = false, jsonl = false;
  CommonFlags flags;
  std::string engine = "enumerate";
  std::size_t max_candidates = 2000000, max_states = 200000;
  int count = 1, target_nodes = 21, graphs = 10, max_wildcards = 4, query_wildcards = -1;
  std::uint64_t seed = 0;

  CLI::App* m = app.add_subcommand("match", "decide whether the pattern matches the graph");
  m->add_option("pattern", ppath, "pattern JSON file")->required();
  m->add_option("graph", gpath, "graph JSON file")->required();
  flags.attach(m);
  m->add_flag("--witness", want_witness, "print the witness on a match");
  m->add_flag("--json", as_json, "print the full result as JSON");

  CLI::App* e = app.add_subcommand("encode", "emit the DIMACS formula for an instance");
  e->add_option("pattern", ppath)->required();
  e->add_option("graph", gpath)->required();
  flags.attach(e, false);
  e->add_option("-o,--out", out, "DIMACS output path (default stdout)");
  e->add_option("--map", map_out, "write the variable map sidecar JSON here");
  e->add_option("--emit-expanded", exp_out, "write the expanded pattern JSON here");

  CLI::App* mg = app.add_subcommand("merge", "contract the graph and report what merged");
  mg->add_option("pattern", ppath)->required();
  mg->add_option("graph", gpath)->required();
  mg->add_option("-o,--out", out, "merged graph output path (default stdout)");
  mg->add_option("--report", report_out, "write the merge report JSON here");

  CLI::App* orc = app.add_subcommand("oracle", "decide with the reference oracle");
  orc->add_option("pattern", ppath)->required();
  orc->add_option("graph", gpath)->required();
  orc->add_option("--engine", engine, "enumerate (default) or rules")
      ->check(CLI::IsMember({"enumerate", "rules"}));
  orc->add_option("--max-candidates", max_candidates, "enumeration budget");
  orc->add_option("--max-states", max_states, "rule-search budget");
  orc->add_flag("--witness", want_witness, "print the witness on a match");

  CLI::App* gn = app.add_subcommand("gen", "generate CFG-shaped graphs or chain queries");
  gn->add_option("--count", count, "number of graphs")->check(CLI::NonNegativeNumber);
  gn->add_option("--seed", seed, "base seed");
  gn->add_option("--target-nodes", target_nodes, "size center")->check(CLI::PositiveNumber);
  gn->add_option("--query-wildcards", query_wildcards,
                 "emit one chain query with this many wildcards instead of graphs");
  gn->add_option("-o,--out", out, "output path (default stdout)");
  gn->add_option("--dir", dir, "write the corpus as one JSON file per graph here");

  CLI::App* bn = app.add_subcommand("bench", "sweep generated instances and emit CSV");
  bn->add_option("--graphs", graphs, "corpus size")->check(CLI::NonNegativeNumber);
  bn->add_option("--max-wildcards", max_wildcards, "queries per graph: 0..this many wildcards");
  flags.attach(bn);  // --seed doubles as the corpus seed here
  auto* sum_flag = bn->add_flag("--summary", summary, "emit size and per-wildcard aggregates");
  bn->add_flag("--jsonl", jsonl, "emit rows as JSON lines instead of CSV")->excludes(sum_flag);
  bn->add_option("-o,--out", out, "CSV output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& h) {
    return app.exit(h);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitUsage;
  }

  try {
    if (*m) return run_match(ppath, gpath, flags, want_witness, as_json);
    if (*e) return run_encode(ppath, gpath, flags, out, map_out, exp_out);
    if (*mg) return run_merge(ppath, gpath, out, report_out);
    if (*orc) return run_oracle(ppath, gpath, engine, max_candidates, max_states, want_witness);
    if (*gn) return run_gen(count, seed, target_nodes, out, dir, query_wildcards);
    if (*bn) return run_bench(graphs, max_wildcards, flags.seed, flags, summary, jsonl, out);
  } catch (const ParseError& err) {
    std::cerr << "regap: " << err.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& err) {
    std::cerr << "regap: " << err.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& err) {
    std::cerr << "regap: internal error: " << err.what() << "\n";
    return kExitSoftware;
  }
  return kExitUsage;
}

#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "regap/encode.hpp"
#include "regap/merge.hpp"
#include "regap/solver.hpp"

namespace regap {

enum class MatchStatus { Match, NoMatch, Unknown };

inline const char* to_string(MatchStatus s) {
  switch (s) {
    case MatchStatus::Match: return "MATCH";
    case MatchStatus::NoMatch: return "NO-MATCH";
    default: return "UNKNOWN";
  }
}

struct MatchOptions {
  bool merge = true;             // run the contraction preprocessor first
  int k = 0;                     // fixed expansion depth; 0 picks the full one
  bool iterate_k = false;        // try k = 1, 2, 4, ... before the full depth
  long long timeout_ms = 60000;  // wall budget across attempts; negative: none
  std::uint64_t seed = 0;
  std::string external_solver;   // empty: builtin CDCL
};

struct MatchResult {
  MatchStatus status = MatchStatus::Unknown;
  MatchWitness witness;  // against `graph` below when status == Match
  Graph graph;           // the graph actually encoded (merged when enabled)
  MergeReport merge_report;
  int k_used = 0;
  bool k_incomplete = false;  // last attempt ran at a truncated depth
  int attempts = 0;
  SolveStats stats;  // summed over attempts
  std::string note;
};

// Full decision pipeline: contract, encode, solve, decode.  A Sat model is a
// match at any depth; Unsat is only a verdict when the depth was not capped.
// Witnesses name merged-graph nodes; merge_report says what was contracted.
inline MatchResult match(const Pattern& p, const Graph& g0, MatchOptions opt = {}) {
  MatchResult res;
  Graph g = g0;
  if (opt.merge) {
    auto [m, rep] = merge_fixpoint(std::move(g), p);
    g = std::move(m);
    res.merge_report = rep;
  } else {
    res.merge_report.nodes_before = res.merge_report.nodes_after = g.n();
  }
  res.graph = g;

  const int full_k = choose_k(g);
  std::vector<int> ks;
  if (opt.k > 0) {
    ks.push_back(opt.k);
  } else if (opt.iterate_k) {
    for (int k = 1; k < full_k; k *= 2) ks.push_back(k);
    ks.push_back(full_k);
  } else {
    ks.push_back(full_k);
  }

  const auto start = std::chrono::steady_clock::now();
  auto left_ms = [&]() -> long long {
    if (opt.timeout_ms < 0) return -1;
    auto used = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - start)
                    .count();
    return opt.timeout_ms - used;
  };

  for (int k : ks) {
    long long left = left_ms();
    if (opt.timeout_ms >= 0 && left <= 0) {
      res.status = MatchStatus::Unknown;
      res.note = "timeout";
      return res;
    }

    EncodeOptions eo;
    eo.k = k;
    EncodeResult enc = encode(p, g, eo);
    ++res.attempts;
    res.k_used = enc.k;
    res.k_incomplete = enc.k_incomplete;

    SolveResult sr;
    if (!opt.external_solver.empty()) {
      sr = solve_external(opt.external_solver, enc.cnf);
    } else {
      SolveBudget budget;
      budget.max_millis = left;
      sr = solve(enc.cnf, budget, opt.seed);
    }
    res.stats.conflicts += sr.stats.conflicts;
    res.stats.decisions += sr.stats.decisions;
    res.stats.propagations += sr.stats.propagations;
    res.stats.restarts += sr.stats.restarts;

    if (sr.status == SolveStatus::Sat) {
      res.witness = decode_model(enc, p, g, sr.model);
      res.status = MatchStatus::Match;
      return res;
    }
    if (sr.status == SolveStatus::Unknown) {
      res.status = MatchStatus::Unknown;
      res.note = sr.unknown_reason.empty() ? "solver gave up" : sr.unknown_reason;
      return res;
    }
    if (!enc.k_incomplete) {
      res.status = MatchStatus::NoMatch;
      return res;
    }
  }
  res.status = MatchStatus::Unknown;
  res.note = "unsat at capped depth " + std::to_string(res.k_used) + "; not a verdict";
  return res;
}

}  // namespace regap

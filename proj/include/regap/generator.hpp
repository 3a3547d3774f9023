#pragma once

#include <cmath>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "regap/graph.hpp"

namespace regap {

// Seeded generator for control-flow shaped graphs: straight-line runs,
// if/else diamonds, and while loops with back edges.  Node kinds mimic a
// compiler IR; branch out-edges carry a boolean "taken" label.

struct GenOptions {
  int target_nodes = 21;  // corpus sizes spread around this
  std::uint64_t seed = 0;
};

namespace gen_detail {

struct Exit {
  std::string node;
  int taken = -1;  // -1 plain edge, else the branch label to use
};

struct Builder {
  std::vector<std::pair<std::string, AttrMap>> nodes;
  std::vector<std::tuple<std::string, std::string, AttrMap>> edges;
  int budget = 0;

  std::string fresh(const std::string& kind) {
    std::string id = "n" + std::to_string(nodes.size());
    nodes.push_back({id, {{"kind", kind}, {"line", std::int64_t(nodes.size())}}});
    --budget;
    return id;
  }

  void wire(const Exit& from, const std::string& to) {
    AttrMap a;
    if (from.taken >= 0) a["taken"] = from.taken != 0;
    edges.push_back({from.node, to, std::move(a)});
  }
};

inline std::string stmt_kind(std::mt19937_64& rng) {
  return rng() % 3 == 0 ? "call" : "assign";
}

std::string region(Builder& b, std::mt19937_64& rng, int budget, std::vector<Exit>& exits);

// One construct; returns its entry, appends its fall-through exits.
inline std::string construct(Builder& b, std::mt19937_64& rng, int budget,
                             std::vector<Exit>& exits) {
  unsigned roll = rng() % 100;
  if (budget >= 4 && roll < 22) {  // if/else, else arm optional
    std::string br = b.fresh("branch");
    std::vector<Exit> then_exits;
    int arm = std::max(1, (budget - 1) / (rng() % 2 ? 2 : 3));
    std::string then_entry = region(b, rng, arm, then_exits);
    b.wire({br, 1}, then_entry);
    for (auto& e : then_exits) exits.push_back(e);
    if (b.budget >= 1 && rng() % 2) {
      std::vector<Exit> else_exits;
      std::string else_entry = region(b, rng, std::max(1, arm / 2), else_exits);
      b.wire({br, 0}, else_entry);
      for (auto& e : else_exits) exits.push_back(e);
    } else {
      exits.push_back({br, 0});
    }
    return br;
  }
  if (budget >= 3 && roll < 40) {  // while loop with a back edge
    std::string head = b.fresh("loop-head");
    std::vector<Exit> body_exits;
    std::string body_entry = region(b, rng, std::max(1, budget - 1), body_exits);
    b.wire({head, 1}, body_entry);
    for (auto& e : body_exits) b.wire(e, head);
    exits.push_back({head, 0});
    return head;
  }
  int len = 1 + static_cast<int>(rng() % 3);
  len = std::min(len, std::max(1, budget));
  std::string entry = b.fresh(stmt_kind(rng));
  std::string prev = entry;
  for (int i = 1; i < len; ++i) {
    std::string next = b.fresh(stmt_kind(rng));
    b.wire({prev, -1}, next);
    prev = next;
  }
  exits.push_back({prev, -1});
  return entry;
}

// A run of constructs wired in sequence, spending roughly `budget` nodes.
inline std::string region(Builder& b, std::mt19937_64& rng, int budget,
                          std::vector<Exit>& exits) {
  std::string entry;
  std::vector<Exit> dangling;
  int local = budget;
  while (local > 0 && b.budget > 0) {
    std::vector<Exit> next_exits;
    int before = b.budget;
    std::string e = construct(b, rng, std::min(local, b.budget), next_exits);
    for (auto& d : dangling) b.wire(d, e);
    if (entry.empty()) entry = e;
    dangling = std::move(next_exits);
    local -= before - b.budget;
  }
  if (entry.empty()) {
    entry = b.fresh(stmt_kind(rng));
    dangling.push_back({entry, -1});
  }
  exits.insert(exits.end(), dangling.begin(), dangling.end());
  return entry;
}

}  // namespace gen_detail

inline Graph gen_cfg(GenOptions opt = {}) {
  std::mt19937_64 rng(opt.seed * 0x9e3779b97f4a7c15ULL + 0xd1b54a32d192ed03ULL);
  std::normal_distribution<double> spread(opt.target_nodes, opt.target_nodes / 5.0);
  gen_detail::Builder b;
  b.budget = std::max(4, static_cast<int>(std::llround(spread(rng)))) - 1;

  std::vector<gen_detail::Exit> exits;
  gen_detail::region(b, rng, b.budget, exits);
  std::string ret = b.nodes.emplace_back("n" + std::to_string(b.nodes.size()),
                                         AttrMap{{"kind", std::string("return")},
                                                 {"line", std::int64_t(b.nodes.size())}})
                        .first;
  for (auto& e : exits) b.wire(e, ret);
  return Graph::make(std::move(b.nodes), std::move(b.edges));
}

inline std::vector<Graph> gen_corpus(int count, GenOptions base = {}) {
  std::vector<Graph> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    GenOptions o = base;
    o.seed = base.seed + static_cast<std::uint64_t>(i);
    out.push_back(gen_cfg(o));
  }
  return out;
}

// Chain query over CFG kinds: concretes pinned to a node kind, interleaved
// with `wildcards` wildcard slots of seeded kinds.
inline Pattern gen_query(std::uint64_t seed, int wildcards) {
  std::mt19937_64 rng(seed ^ 0xabcdef1234567890ULL);
  const char* kinds[] = {"assign", "call", "branch", "loop-head", "return"};
  const char* wkinds[] = {"seq0plus", "seq1plus", "sub0plus", "sub1plus"};

  json nodes = json::array();
  json edges = json::array();
  int slots = wildcards == 0 ? 3 : 2 * wildcards + 1;
  std::string prev;
  for (int i = 0; i < slots; ++i) {
    std::string id;
    json node;
    if (i % 2 == 1 && wildcards > 0) {
      id = "W" + std::to_string(i);
      node = {{"id", id}, {"kind", wkinds[rng() % 4]}};
    } else {
      id = "C" + std::to_string(i);
      node = {{"id", id},
              {"constraint",
               {{"op", "eq"}, {"attr", "kind"}, {"value", kinds[rng() % 5]}}}};
    }
    nodes.push_back(node);
    if (!prev.empty()) edges.push_back({{"src", prev}, {"dst", id}});
    prev = id;
  }
  return Pattern::from_json({{"nodes", nodes}, {"edges", edges}});
}

}  // namespace regap

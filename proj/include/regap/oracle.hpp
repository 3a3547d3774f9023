#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "regap/witness.hpp"

namespace regap {

enum class OracleStatus { Yes, No, Unknown };

struct OracleOptions {
  std::size_t max_candidates = 2000000;  // witness-enumeration budget
  std::size_t max_states = 200000;       // rule-search state budget
  int extra_nodes = 2;                   // rule-search growth slack
};

struct OracleResult {
  OracleStatus status = OracleStatus::Unknown;
  MatchWitness witness;  // populated when status == Yes
  std::size_t states = 0;  // candidates or search states examined
  std::string note;
};

// Exhaustive structure check for wildcard-free patterns, written directly
// against the definition rather than the shared validator.
inline bool brute_force_isomorphism(const Pattern& p, const Graph& g) {
  for (auto k : p.kinds)
    if (k != NodeKind::Concrete) throw std::invalid_argument("pattern has wildcards");
  if (p.n() != g.n() || p.m() != g.m()) return false;

  std::vector<int> to(p.n(), -1);
  std::vector<char> used(g.n(), 0);
  auto feasible = node_phi_matrix(p, g);

  std::function<bool(int)> place = [&](int u) -> bool {
    if (u == p.n()) {
      for (int e = 0; e < p.m(); ++e) {
        auto [a, b] = p.edges[e];
        int idx = g.edge_index(to[a], to[b]);
        if (idx < 0 || !p.edge_constraints[e].eval(g.edge_attrs[idx])) return false;
      }
      for (const auto& pd : p.pairs)
        if (!pd.c.eval(g.node_attrs[to[pd.u]], g.node_attrs[to[pd.v]])) return false;
      return true;
    }
    for (int x = 0; x < g.n(); ++x) {
      if (used[x] || !feasible[u][x]) continue;
      to[u] = x;
      used[x] = 1;
      if (place(u + 1)) return true;
      used[x] = 0;
      to[u] = -1;
    }
    return false;
  };
  return place(0);
}

// Decision oracle: enumerate every witness shape and let check_witness keep
// the honest ones.  Concrete images are placed injectively, leftover nodes are
// dealt to wildcards, and sequence contents are ordered along real paths.
// Exhaustion is a definite No; only the candidate cap yields Unknown.
inline OracleResult oracle_match(const Pattern& p, const Graph& g, OracleOptions opt = {}) {
  OracleResult res;

  std::vector<int> concretes, wilds;
  for (int u = 0; u < p.n(); ++u)
    (p.kind(u) == NodeKind::Concrete ? concretes : wilds).push_back(u);
  int mandatory_wilds = 0;
  for (int u : wilds) mandatory_wilds += is_one_plus(p.kind(u)) ? 1 : 0;

  if (g.n() < static_cast<int>(concretes.size()) + mandatory_wilds) {
    res.status = OracleStatus::No;
    res.note = "graph smaller than mandatory pattern slots";
    return res;
  }
  if (wilds.empty() && g.n() != p.n()) {
    res.status = OracleStatus::No;
    res.note = "size mismatch without wildcards";
    return res;
  }

  auto feas = node_phi_matrix(p, g);
  MatchWitness w;
  w.f.assign(p.n(), -1);
  w.contents.assign(p.n(), {});
  std::vector<char> used(g.n(), 0);
  std::vector<std::vector<int>> owned(p.n());
  std::vector<int> rem;
  bool capped = false;

  auto consider = [&]() -> bool {
    if (++res.states > opt.max_candidates) {
      capped = true;
      return false;
    }
    return !check_witness(p, g, w).has_value();
  };

  std::function<bool(std::size_t)> fill_orders = [&](std::size_t wi) -> bool {
    if (capped) return false;
    if (wi == wilds.size()) return consider();
    int u = wilds[wi];
    if (is_seq(p.kind(u)) && owned[u].size() > 1) {
      std::vector<int>& slot = w.contents[u];
      std::vector<char> taken(owned[u].size(), 0);
      std::function<bool()> extend = [&]() -> bool {
        if (capped) return false;
        if (slot.size() == owned[u].size()) return fill_orders(wi + 1);
        for (std::size_t i = 0; i < owned[u].size(); ++i) {
          if (taken[i]) continue;
          int x = owned[u][i];
          if (!slot.empty() && g.edge_index(slot.back(), x) < 0) continue;
          taken[i] = 1;
          slot.push_back(x);
          if (extend()) return true;
          slot.pop_back();
          taken[i] = 0;
        }
        return false;
      };
      if (extend()) return true;
      slot.clear();
      return false;
    }
    w.contents[u] = owned[u];  // already ascending, which subgraph slots require
    if (fill_orders(wi + 1)) return true;
    w.contents[u].clear();
    return false;
  };

  std::function<bool(std::size_t)> own = [&](std::size_t j) -> bool {
    if (capped) return false;
    if (j == rem.size()) {
      for (int u : wilds)
        if (is_one_plus(p.kind(u)) && owned[u].empty()) return false;
      return fill_orders(0);
    }
    for (int u : wilds) {
      owned[u].push_back(rem[j]);
      if (own(j + 1)) return true;
      owned[u].pop_back();
    }
    return false;
  };

  std::function<bool(std::size_t)> place = [&](std::size_t i) -> bool {
    if (capped) return false;
    if (i == concretes.size()) {
      rem.clear();
      for (int x = 0; x < g.n(); ++x)
        if (!used[x]) rem.push_back(x);
      if (wilds.empty()) return rem.empty() ? consider() : false;
      if (static_cast<int>(rem.size()) < mandatory_wilds) return false;
      return own(0);
    }
    int u = concretes[i];
    for (int x = 0; x < g.n(); ++x) {
      if (used[x] || !feas[u][x]) continue;
      used[x] = 1;
      w.f[u] = x;
      if (place(i + 1)) return true;
      used[x] = 0;
      w.f[u] = -1;
    }
    return false;
  };

  if (place(0)) {
    res.status = OracleStatus::Yes;
    res.witness = w;
    return res;
  }
  if (capped) {
    res.status = OracleStatus::Unknown;
    res.note = "candidate budget exhausted";
    return res;
  }
  res.status = OracleStatus::No;
  return res;
}

namespace oracle_detail {

// Working graph during generalization.  Contents hold original graph node
// indices; sequences keep absorption order, subgraphs stay sorted.
struct State {
  std::vector<NodeKind> kind;
  std::vector<std::vector<int>> contents;
  std::set<std::pair<int, int>> edges;
  int rule_floor = 0;  // highest rule index applied so far

  int n() const { return static_cast<int>(kind.size()); }

  std::set<int> outs(int u) const {
    std::set<int> r;
    for (auto [a, b] : edges)
      if (a == u) r.insert(b);
    return r;
  }
  std::set<int> ins(int u) const {
    std::set<int> r;
    for (auto [a, b] : edges)
      if (b == u) r.insert(a);
    return r;
  }
};

inline State merge_nodes(const State& s, int keep, int drop, NodeKind k,
                         std::vector<int> contents) {
  State t;
  t.rule_floor = s.rule_floor;
  std::vector<int> remap(s.n());
  for (int i = 0, j = 0; i < s.n(); ++i) {
    if (i == drop) {
      remap[i] = -1;
      continue;
    }
    remap[i] = j++;
    t.kind.push_back(i == keep ? k : s.kind[i]);
    t.contents.push_back(i == keep ? contents : s.contents[i]);
  }
  remap[drop] = remap[keep];
  for (auto [a, b] : s.edges) t.edges.insert({remap[a], remap[b]});
  return t;
}

// Canonical string: iterated neighborhood refinement seeded with kind and
// contents, individualizing ties.  States are tiny, so the recursion is
// shallow in practice.
inline std::string canon_from(const State& s, std::vector<int> color) {
  const int n = s.n();
  for (int round = 0; round < n; ++round) {
    std::map<std::string, int> dense;
    std::vector<std::string> key(n);
    for (int i = 0; i < n; ++i) {
      std::string k = std::to_string(color[i]);
      std::vector<int> outc, inc;
      for (auto [a, b] : s.edges) {
        if (a == i) outc.push_back(color[b]);
        if (b == i) inc.push_back(color[a]);
      }
      std::sort(outc.begin(), outc.end());
      std::sort(inc.begin(), inc.end());
      k += "|";
      for (int c : outc) k += std::to_string(c) + ",";
      k += "|";
      for (int c : inc) k += std::to_string(c) + ",";
      key[i] = std::move(k);
    }
    std::vector<int> next(n);
    for (int i = 0; i < n; ++i)
      next[i] = dense.try_emplace(key[i], static_cast<int>(dense.size())).first->second;
    if (next == color) break;
    color = std::move(next);
  }

  std::map<int, std::vector<int>> classes;
  for (int i = 0; i < n; ++i) classes[color[i]].push_back(i);
  for (const auto& [c, members] : classes) {
    if (members.size() == 1) continue;
    std::string best;
    for (int m : members) {
      std::vector<int> forced = color;
      forced[m] = n + 7919;  // fresh color outside the dense range
      std::string cand = canon_from(s, std::move(forced));
      if (best.empty() || cand < best) best = std::move(cand);
    }
    return best;
  }

  std::vector<int> order(n), rank(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return color[a] < color[b]; });
  for (int i = 0; i < n; ++i) rank[order[i]] = i;
  std::string out;
  for (int i : order) {
    out += kind_name(s.kind[i])[0];
    out += std::to_string(static_cast<int>(s.kind[i]));
    out += ":";
    for (int c : s.contents[i]) out += std::to_string(c) + ",";
    out += ";";
  }
  std::vector<std::pair<int, int>> es;
  for (auto [a, b] : s.edges) es.push_back({rank[a], rank[b]});
  std::sort(es.begin(), es.end());
  out += "E";
  for (auto [a, b] : es) out += std::to_string(a) + ">" + std::to_string(b) + ";";
  return out;
}

inline std::string canon(const State& s) {
  std::map<std::string, int> dense;
  std::vector<int> color(s.n());
  for (int i = 0; i < s.n(); ++i) {
    std::string k = std::to_string(static_cast<int>(s.kind[i])) + ":";
    for (int c : s.contents[i]) k += std::to_string(c) + ",";
    color[i] = dense.try_emplace(k, static_cast<int>(dense.size())).first->second;
  }
  return canon_from(s, std::move(color));
}

// Tries to line the state up with the pattern node-for-node and hands every
// complete alignment to the semantic validator.
inline bool try_candidate(const State& s, const Pattern& p, const Graph& g,
                          MatchWitness& out) {
  if (s.n() != p.n()) return false;
  std::vector<int> to(s.n(), -1);
  std::vector<char> used(p.n(), 0);

  std::function<bool(int)> place = [&](int i) -> bool {
    if (i == s.n()) {
      for (auto [a, b] : s.edges)
        if (!p.has_edge(to[a], to[b])) return false;
      if (static_cast<int>(s.edges.size()) != p.m()) return false;
      MatchWitness w;
      w.f.assign(p.n(), -1);
      w.contents.resize(p.n());
      for (int h = 0; h < s.n(); ++h) {
        if (s.kind[h] == NodeKind::Concrete)
          w.f[to[h]] = s.contents[h].front();
        else
          w.contents[to[h]] = s.contents[h];
      }
      if (check_witness(p, g, w)) return false;
      out = std::move(w);
      return true;
    }
    for (int u = 0; u < p.n(); ++u) {
      if (used[u] || p.kind(u) != s.kind[i]) continue;
      to[i] = u;
      used[u] = 1;
      if (place(i + 1)) return true;
      used[u] = 0;
      to[i] = -1;
    }
    return false;
  };
  return place(0);
}

}  // namespace oracle_detail

// Search for a generalization of g isomorphic to p, applying rules in
// non-decreasing index order.  Rule applications are deliberately permissive;
// every candidate alignment is vetted by check_witness, which carries the
// attribute and connectivity semantics.  The reachable space balloons on
// instances that need exhaustion, so a definite No is only practical on tiny
// inputs; oracle_match is the decision procedure, this is the rule engine.
inline OracleResult derive_by_rules(const Pattern& p, const Graph& g, OracleOptions opt = {}) {
  using oracle_detail::State;
  OracleResult res;

  // Necessary conditions worth testing before any search.
  int need = p.num_concrete();
  for (auto k : p.kinds) need += is_one_plus(k) ? 1 : 0;
  if (g.n() < need) {
    res.status = OracleStatus::No;
    res.note = "graph smaller than mandatory pattern slots";
    return res;
  }
  {
    auto feas = node_phi_matrix(p, g);
    std::vector<int> match_of(g.n(), -1);
    std::function<bool(int, std::vector<char>&)> augment = [&](int u,
                                                               std::vector<char>& seen) {
      for (int x = 0; x < g.n(); ++x) {
        if (!feas[u][x] || seen[x]) continue;
        seen[x] = 1;
        if (match_of[x] < 0 || augment(match_of[x], seen)) {
          match_of[x] = u;
          return true;
        }
      }
      return false;
    };
    for (int u = 0; u < p.n(); ++u) {
      if (p.kind(u) != NodeKind::Concrete) continue;
      std::vector<char> seen(g.n(), 0);
      if (!augment(u, seen)) {
        res.status = OracleStatus::No;
        res.note = "concrete nodes cannot be placed injectively";
        return res;
      }
    }
  }

  const int node_budget = g.n() + p.n() + opt.extra_nodes;
  State init;
  init.kind.assign(g.n(), NodeKind::Concrete);
  init.contents.resize(g.n());
  for (int i = 0; i < g.n(); ++i) init.contents[i] = {i};
  for (auto e : g.edges) init.edges.insert(e);

  std::deque<State> queue{init};
  std::map<std::string, int> memo{{oracle_detail::canon(init), 0}};

  auto offer = [&](State t, int rule) {
    if (t.n() > node_budget) return;
    int concretes = 0;
    for (auto k : t.kind) concretes += (k == NodeKind::Concrete);
    if (concretes < p.num_concrete()) return;  // concretes never come back
    t.rule_floor = rule;
    std::string c = oracle_detail::canon(t);
    auto it = memo.find(c);
    if (it != memo.end() && it->second <= rule) return;
    memo[c] = rule;
    queue.push_back(std::move(t));
  };

  auto add_fresh = [&](const State& s, NodeKind k) {
    State t = s;
    t.kind.push_back(k);
    t.contents.push_back({});
    return t;
  };

  // Edges between the merged pair either dissolve into the content or stay
  // behind as a self-loop; both readings are offered and the validator keeps
  // whichever is honest.
  auto offer_merge = [&](const State& s, int keep, int drop, NodeKind k,
                         const std::vector<int>& contents, int rule) {
    bool mutual = s.edges.count({keep, drop}) || s.edges.count({drop, keep});
    State base = s;
    base.edges.erase({keep, drop});
    base.edges.erase({drop, keep});
    offer(oracle_detail::merge_nodes(base, keep, drop, k, contents), rule);
    if (mutual) offer(oracle_detail::merge_nodes(s, keep, drop, k, contents), rule);
  };

  while (!queue.empty()) {
    if (res.states >= opt.max_states) {
      res.status = OracleStatus::Unknown;
      res.note = "state budget exhausted";
      return res;
    }
    State s = std::move(queue.front());
    queue.pop_front();
    ++res.states;

    if (oracle_detail::try_candidate(s, p, g, res.witness)) {
      res.status = OracleStatus::Yes;
      return res;
    }

    const int floor = s.rule_floor;

    // 1: promote a concrete node to a 1+ wildcard of either flavor.
    if (floor <= 1) {
      for (int u = 0; u < s.n(); ++u) {
        if (s.kind[u] != NodeKind::Concrete) continue;
        for (auto k : {NodeKind::Seq1Plus, NodeKind::Sub1Plus}) {
          State t = s;
          t.kind[u] = k;
          offer(std::move(t), 1);
        }
      }
    }
    // 2: absorb a sole predecessor into a sequence wildcard.
    if (floor <= 2) {
      for (auto [u, v] : s.edges) {
        if (u == v || s.kind[u] != NodeKind::Concrete || !is_seq(s.kind[v])) continue;
        if (s.outs(u) != std::set<int>{v} || s.ins(v) != std::set<int>{u}) continue;
        std::vector<int> c = s.contents[u];
        c.insert(c.end(), s.contents[v].begin(), s.contents[v].end());
        offer_merge(s, v, u, NodeKind::Seq1Plus, c, 2);
      }
    }
    // 3: split an edge through a fresh empty 0+ wildcard.
    if (floor <= 3) {
      for (auto [a, b] : s.edges) {
        for (auto k : {NodeKind::Seq0Plus, NodeKind::Sub0Plus}) {
          State t = add_fresh(s, k);
          int w = t.n() - 1;
          t.edges.erase({a, b});
          t.edges.insert({a, w});
          t.edges.insert({w, b});
          offer(std::move(t), 3);
        }
      }
    }
    // 4: coalesce two 0+ sequence wildcards, either order.
    if (floor <= 4) {
      for (int u = 0; u < s.n(); ++u)
        for (int v = 0; v < s.n(); ++v) {
          if (u == v || s.kind[u] != NodeKind::Seq0Plus || s.kind[v] != NodeKind::Seq0Plus)
            continue;
          std::vector<int> c = s.contents[u];
          c.insert(c.end(), s.contents[v].begin(), s.contents[v].end());
          offer_merge(s, u, v, NodeKind::Seq0Plus, c, 4);
        }
    }
    // 5: fold any 0+ wildcard into a 0+ subgraph wildcard.
    if (floor <= 5) {
      for (int u = 0; u < s.n(); ++u)
        for (int v = 0; v < s.n(); ++v) {
          if (u == v || !is_zero_plus(s.kind[u]) || s.kind[v] != NodeKind::Sub0Plus) continue;
          std::vector<int> c = s.contents[u];
          c.insert(c.end(), s.contents[v].begin(), s.contents[v].end());
          std::sort(c.begin(), c.end());
          offer_merge(s, v, u, NodeKind::Sub0Plus, c, 5);
        }
    }
    // 6: fold any wildcard into a 1+ wildcard, landing on a 1+ subgraph.
    if (floor <= 6) {
      for (int u = 0; u < s.n(); ++u)
        for (int v = 0; v < s.n(); ++v) {
          if (u == v || !is_one_plus(s.kind[u]) || !is_wildcard(s.kind[v])) continue;
          std::vector<int> c = s.contents[u];
          c.insert(c.end(), s.contents[v].begin(), s.contents[v].end());
          std::sort(c.begin(), c.end());
          offer_merge(s, u, v, NodeKind::Sub1Plus, c, 6);
        }
    }
    // 7, 8: relax 1+ wildcards to 0+.
    if (floor <= 7) {
      for (int u = 0; u < s.n(); ++u) {
        if (s.kind[u] != NodeKind::Seq1Plus) continue;
        State t = s;
        t.kind[u] = NodeKind::Seq0Plus;
        offer(std::move(t), 7);
      }
    }
    if (floor <= 8) {
      for (int u = 0; u < s.n(); ++u) {
        if (s.kind[u] != NodeKind::Sub1Plus) continue;
        State t = s;
        t.kind[u] = NodeKind::Sub0Plus;
        offer(std::move(t), 8);
      }
    }
    // 9, 10: hang a fresh empty 0+ wildcard off a node, or drop one in
    // isolation.
    if (floor <= 9) {
      for (auto k : {NodeKind::Seq0Plus, NodeKind::Sub0Plus}) {
        offer(add_fresh(s, k), 9);
        for (int u = 0; u < s.n(); ++u) {
          State t = add_fresh(s, k);
          t.edges.insert({u, t.n() - 1});
          offer(std::move(t), 9);
        }
      }
    }
    if (floor <= 10) {
      for (auto k : {NodeKind::Seq0Plus, NodeKind::Sub0Plus})
        for (int u = 0; u < s.n(); ++u) {
          State t = add_fresh(s, k);
          t.edges.insert({t.n() - 1, u});
          offer(std::move(t), 10);
        }
    }
    // 11, 12: late sequence coalescing when both sides dangle.
    if (floor <= 12) {
      for (int u = 0; u < s.n(); ++u)
        for (int v = 0; v < s.n(); ++v) {
          if (u == v || s.kind[u] != NodeKind::Seq0Plus || s.kind[v] != NodeKind::Seq0Plus)
            continue;
          std::vector<int> c = s.contents[u];
          c.insert(c.end(), s.contents[v].begin(), s.contents[v].end());
          bool no_out = s.outs(u).empty() && s.outs(v).empty();
          bool no_in = s.ins(u).empty() && s.ins(v).empty();
          if (no_out && floor <= 11) offer_merge(s, u, v, NodeKind::Seq0Plus, c, 11);
          if (no_in) offer_merge(s, u, v, NodeKind::Seq0Plus, c, 12);
        }
    }
    // 13, 14: late subgraph coalescing when both sides dangle.
    if (floor <= 14) {
      for (int u = 0; u < s.n(); ++u)
        for (int v = 0; v < s.n(); ++v) {
          if (u == v || !is_zero_plus(s.kind[u]) || s.kind[v] != NodeKind::Sub0Plus) continue;
          std::vector<int> c = s.contents[u];
          c.insert(c.end(), s.contents[v].begin(), s.contents[v].end());
          std::sort(c.begin(), c.end());
          bool no_out = s.outs(u).empty() && s.outs(v).empty();
          bool no_in = s.ins(u).empty() && s.ins(v).empty();
          if (no_out && floor <= 13) offer_merge(s, v, u, NodeKind::Sub0Plus, c, 13);
          if (no_in) offer_merge(s, v, u, NodeKind::Sub0Plus, c, 14);
        }
    }
  }

  res.status = OracleStatus::No;
  return res;
}

}  // namespace regap

#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "regap/graph.hpp"

namespace regap {

// Sequence bound.  The safe choice is |V|; smaller overrides are permitted but
// can miss matches, which the caller must surface.
inline int choose_k(const Graph& g, int override_k = 0, bool* incomplete = nullptr) {
  int full = std::max(1, g.n());
  if (override_k == 0) {
    if (incomplete) *incomplete = false;
    return full;
  }
  if (override_k < 1) throw std::invalid_argument("k override must be >= 1");
  if (incomplete) *incomplete = override_k < full;
  return override_k;
}

namespace detail {

inline std::string fresh_id(std::set<std::string>& taken, std::string base) {
  while (taken.count(base)) base += "'";
  taken.insert(base);
  return base;
}

}  // namespace detail

// Rewriting result: head_of/tail_of give, for each original Seq1Plus node,
// the indices of its replacement pair in the rewritten pattern (-1 elsewhere).
struct RewrittenPattern {
  Pattern p;
  std::vector<int> head_of, tail_of;
};

// Eliminates Seq1Plus wildcards: S+ becomes a fresh concrete head plus a
// Seq0Plus tail.  In-edges retarget to the head, out-edges re-source from the
// tail, and the head-tail link is unconstrained.
inline RewrittenPattern rewrite_seq1plus_mapped(const Pattern& p) {
  bool any = false;
  for (auto k : p.kinds) any |= (k == NodeKind::Seq1Plus);
  if (!any) return {p, std::vector<int>(p.n(), -1), std::vector<int>(p.n(), -1)};

  std::set<std::string> taken(p.ids.begin(), p.ids.end());
  std::vector<std::string> head(p.n()), tail(p.n());
  json nodes = json::array();
  for (int i = 0; i < p.n(); ++i) {
    if (p.kind(i) == NodeKind::Seq1Plus) {
      head[i] = detail::fresh_id(taken, p.ids[i] + "#head");
      tail[i] = detail::fresh_id(taken, p.ids[i] + "#tail");
      nodes.push_back({{"id", head[i]}, {"kind", "concrete"}});
      nodes.push_back({{"id", tail[i]}, {"kind", "seq0plus"}});
    } else {
      json nj = {{"id", p.ids[i]}, {"kind", kind_name(p.kind(i))}};
      if (!p.node_constraints[i].is_true()) nj["constraint"] = p.node_constraints[i].to_json();
      nodes.push_back(std::move(nj));
    }
  }
  auto src_name = [&](int i) { return tail[i].empty() ? p.ids[i] : tail[i]; };
  auto dst_name = [&](int i) { return head[i].empty() ? p.ids[i] : head[i]; };
  json edges = json::array();
  for (int e = 0; e < p.m(); ++e) {
    auto [u, v] = p.edges[e];
    json ej = {{"src", src_name(u)}, {"dst", dst_name(v)}};
    if (!p.edge_constraints[e].is_true()) ej["constraint"] = p.edge_constraints[e].to_json();
    edges.push_back(std::move(ej));
  }
  for (int i = 0; i < p.n(); ++i)
    if (!head[i].empty()) edges.push_back({{"src", head[i]}, {"dst", tail[i]}});

  json doc = {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
  if (!p.pairs.empty()) {
    json pc = json::array();
    for (const auto& pd : p.pairs)
      pc.push_back({{"u", p.ids[pd.u]},
                    {"v", p.ids[pd.v]},
                    {"constraint", pd.c.to_json(p.ids[pd.u], p.ids[pd.v])}});
    doc["pair_constraints"] = std::move(pc);
  }
  RewrittenPattern out{Pattern::from_json(doc), std::vector<int>(p.n(), -1),
                       std::vector<int>(p.n(), -1)};
  for (int i = 0; i < p.n(); ++i) {
    if (head[i].empty()) continue;
    out.head_of[i] = out.p.index_of(head[i]);
    out.tail_of[i] = out.p.index_of(tail[i]);
  }
  return out;
}

inline Pattern rewrite_seq1plus(const Pattern& p) { return rewrite_seq1plus_mapped(p).p; }

// Expanded-pattern node: origin is the (rewritten) pattern node index, pos
// orders nodes within one origin (0 for concrete, 1..k for sequence slots,
// 1+graph-index for subgraph copies).
struct ExpNode {
  std::string name;
  int origin = -1;
  int pos = 0;
};

// One potential pattern-level edge between expanded nodes.  chain lists the
// 0+ wildcards skipped over, in path order; phi conjoins every hop's edge
// constraint.  Mids (variant 1) are the internal path/copy edges.
struct ExpEdge {
  int src = -1, dst = -1;
  std::vector<int> chain;
  Constraint phi;
  int variant = 0;  // 0 boundary/skip, 1 mid

  bool is_mid() const { return variant == 1; }
};

// Effective connection: a neighbor s reachable along pattern edges whose
// interior nodes (chain) are all 0+ wildcards.  Enumerated on whichever
// pattern the caller works with (original or rewritten).
struct Connection {
  int node = -1;
  std::vector<int> chain;
};

namespace detail {

inline void chain_dfs(const Pattern& p, int anchor, int cur, bool forward,
                      std::vector<int>& chain, std::vector<Connection>& out) {
  const auto& nbrs = forward ? p.out(cur) : p.in(cur);
  for (int s : nbrs) {
    if (std::find(chain.begin(), chain.end(), s) != chain.end()) continue;
    out.push_back({s, chain});
    if (is_zero_plus(p.kind(s)) && s != anchor) {
      chain.push_back(s);
      chain_dfs(p, anchor, s, forward, chain, out);
      chain.pop_back();
    }
  }
}

}  // namespace detail

// All (s, chain) with a pattern path s -> chain... -> w, interiors 0+ only.
inline std::vector<Connection> effective_preds(const Pattern& p, int w) {
  std::vector<Connection> out;
  std::vector<int> chain;
  detail::chain_dfs(p, w, w, false, chain, out);
  for (auto& c : out) std::reverse(c.chain.begin(), c.chain.end());
  return out;
}

inline std::vector<Connection> effective_succs(const Pattern& p, int w) {
  std::vector<Connection> out;
  std::vector<int> chain;
  detail::chain_dfs(p, w, w, true, chain, out);
  return out;
}

struct ExpandedPattern {
  Pattern rp;  // rewritten pattern (no Seq1Plus)
  int k = 1;
  bool k_incomplete = false;
  std::vector<ExpNode> nodes;
  std::vector<ExpEdge> edges;              // sorted by (src, dst, chain, variant)
  std::vector<std::vector<int>> exp_of;    // rp node -> its exp node indices

  int n_exp() const { return static_cast<int>(nodes.size()); }

  NodeKind kind_of(int exp_node) const { return rp.kind(nodes[exp_node].origin); }

  // Entry slots: where an in-edge may land.
  std::vector<int> entries(int p_node) const {
    if (is_seq(rp.kind(p_node))) return {exp_of[p_node].front()};
    return exp_of[p_node];
  }
  // Exit slots: where an out-edge may originate.
  const std::vector<int>& exits(int p_node) const { return exp_of[p_node]; }

  json to_json(const Graph& g) const {
    (void)g;
    json ns = json::array();
    for (const auto& nd : nodes)
      ns.push_back({{"name", nd.name},
                    {"origin", rp.ids[nd.origin]},
                    {"kind", kind_name(rp.kind(nd.origin))}});
    json es = json::array();
    for (const auto& e : edges) {
      json ej = {{"src", nodes[e.src].name}, {"dst", nodes[e.dst].name}, {"mid", e.is_mid()}};
      if (!e.chain.empty()) {
        json ch = json::array();
        for (int w : e.chain) ch.push_back(rp.ids[w]);
        ej["skips"] = std::move(ch);
      }
      if (!e.phi.is_true()) ej["constraint"] = e.phi.to_json();
      es.push_back(std::move(ej));
    }
    return json{{"k", k}, {"k_incomplete", k_incomplete}, {"nodes", std::move(ns)},
                {"edges", std::move(es)}};
  }
};

// Wildcard-free blowup of the pattern against graph g.  Pre: no Seq1Plus.
inline ExpandedPattern expand(const Pattern& rp, const Graph& g, int k) {
  for (auto kd : rp.kinds)
    if (kd == NodeKind::Seq1Plus)
      throw std::invalid_argument("expand: rewrite_seq1plus must run first");

  ExpandedPattern ep;
  ep.rp = rp;
  ep.k = k;
  ep.k_incomplete = k < g.n();
  ep.exp_of.assign(rp.n(), {});

  for (int i = 0; i < rp.n(); ++i) {
    switch (rp.kind(i)) {
      case NodeKind::Concrete:
        ep.exp_of[i].push_back(ep.n_exp());
        ep.nodes.push_back({rp.ids[i], i, 0});
        break;
      case NodeKind::Seq0Plus:
        for (int j = 1; j <= k; ++j) {
          ep.exp_of[i].push_back(ep.n_exp());
          ep.nodes.push_back({rp.ids[i] + "#" + std::to_string(j), i, j});
        }
        break;
      case NodeKind::Sub0Plus:
      case NodeKind::Sub1Plus:
        for (int v = 0; v < g.n(); ++v) {
          ep.exp_of[i].push_back(ep.n_exp());
          ep.nodes.push_back({rp.ids[i] + "#" + g.id(v), i, v + 1});
        }
        break;
      case NodeKind::Seq1Plus: break;  // unreachable
    }
  }

  // Internal structure: path mids for sequences, an edge-skeleton copy for
  // subgraphs (attributes are irrelevant, copies are unconstrained).
  for (int i = 0; i < rp.n(); ++i) {
    if (is_seq(rp.kind(i))) {
      for (int j = 0; j + 1 < static_cast<int>(ep.exp_of[i].size()); ++j)
        ep.edges.push_back({ep.exp_of[i][j], ep.exp_of[i][j + 1], {}, Constraint::make_true(), 1});
    } else if (is_sub(rp.kind(i))) {
      for (auto [u, v] : g.edges)
        ep.edges.push_back({ep.exp_of[i][u], ep.exp_of[i][v], {}, Constraint::make_true(), 1});
    }
  }

  // Boundary and skip licenses: for every pattern path a -> z1..zr -> b with
  // 0+ interiors, each exit of a may connect to each entry of b.
  for (int a = 0; a < rp.n(); ++a) {
    std::vector<Connection> conns = effective_succs(rp, a);
    for (const auto& cn : conns) {
      std::vector<Constraint> hops;
      int prev = a;
      for (int z : cn.chain) {
        hops.push_back(rp.edge_constraints[rp.edge_index(prev, z)]);
        prev = z;
      }
      hops.push_back(rp.edge_constraints[rp.edge_index(prev, cn.node)]);
      Constraint phi = Constraint::conjunction(std::move(hops));
      for (int x : ep.exits(a))
        for (int y : ep.entries(cn.node)) ep.edges.push_back({x, y, cn.chain, phi, 0});
    }
  }

  std::sort(ep.edges.begin(), ep.edges.end(), [](const ExpEdge& a, const ExpEdge& b) {
    return std::tie(a.src, a.dst, a.chain, a.variant) < std::tie(b.src, b.dst, b.chain, b.variant);
  });
  return ep;
}

}  // namespace regap

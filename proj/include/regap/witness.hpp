#pragma once

#include <optional>
#include <string>
#include <vector>

#include "regap/expand.hpp"
#include "regap/graph.hpp"

namespace regap {

// A claimed match: f maps concrete pattern nodes to graph nodes (-1 for
// wildcards), contents lists each wildcard's absorbed graph nodes (sequence
// kinds in path order, subgraph kinds sorted).
struct MatchWitness {
  std::vector<int> f;
  std::vector<std::vector<int>> contents;

  json to_json(const Pattern& p, const Graph& g) const {
    json map = json::object();
    json cont = json::object();
    for (int i = 0; i < p.n(); ++i) {
      if (p.kind(i) == NodeKind::Concrete) {
        map[p.ids[i]] = g.id(f[i]);
      } else {
        json arr = json::array();
        for (int x : contents[i]) arr.push_back(g.id(x));
        cont[p.ids[i]] = std::move(arr);
      }
    }
    return json{{"map", std::move(map)}, {"contents", std::move(cont)}};
  }

  static MatchWitness from_json(const json& j, const Pattern& p, const Graph& g) {
    MatchWitness w;
    w.f.assign(p.n(), -1);
    w.contents.resize(p.n());
    for (const auto& [pid, gid] : j.at("map").items()) {
      int u = p.index_of(pid), x = g.index_of(gid.get<std::string>());
      if (u < 0 || x < 0) throw ParseError("witness names unknown node");
      w.f[u] = x;
    }
    if (j.contains("contents")) {
      for (const auto& [pid, arr] : j.at("contents").items()) {
        int u = p.index_of(pid);
        if (u < 0) throw ParseError("witness names unknown node");
        for (const auto& gid : arr) {
          int x = g.index_of(gid.get<std::string>());
          if (x < 0) throw ParseError("witness names unknown node");
          w.contents[u].push_back(x);
        }
      }
    }
    return w;
  }
};

namespace detail {

// Slot of a graph node inside the witness: which pattern node owns it and at
// what content position (-1 when it is a concrete image).
struct Slot {
  int p_node = -1;
  int pos = -1;
};

}  // namespace detail

// Full semantic check of a witness against pattern and graph.  Returns an
// explanation for the first violation found, nullopt when the witness is a
// genuine match.  This is the reference judgment; the CNF encoding and the
// search oracle both answer to it.
inline std::optional<std::string> check_witness(const Pattern& p, const Graph& g,
                                                const MatchWitness& w) {
  auto fail = [](std::string msg) { return std::optional<std::string>(std::move(msg)); };

  if (static_cast<int>(w.f.size()) != p.n() || static_cast<int>(w.contents.size()) != p.n())
    return fail("witness shape does not match pattern");

  // Concrete images: total, in range, constraint-satisfying.
  for (int u = 0; u < p.n(); ++u) {
    if (p.kind(u) == NodeKind::Concrete) {
      if (w.f[u] < 0 || w.f[u] >= g.n()) return fail("concrete node " + p.ids[u] + " unmapped");
      if (!w.contents[u].empty()) return fail("concrete node " + p.ids[u] + " has contents");
      if (!p.node_constraints[u].eval(g.node_attrs[w.f[u]]))
        return fail("node constraint fails at " + p.ids[u]);
    } else {
      if (w.f[u] != -1) return fail("wildcard " + p.ids[u] + " has a direct image");
      if (is_one_plus(p.kind(u)) && w.contents[u].empty())
        return fail("one-plus wildcard " + p.ids[u] + " is empty");
    }
  }

  // Partition of the graph nodes.
  std::vector<detail::Slot> slot(g.n());
  std::vector<char> owned(g.n(), 0);
  auto claim = [&](int x, int pn, int pos) -> bool {
    if (owned[x]) return false;
    owned[x] = 1;
    slot[x] = {pn, pos};
    return true;
  };
  for (int u = 0; u < p.n(); ++u) {
    if (p.kind(u) == NodeKind::Concrete) {
      if (!claim(w.f[u], u, -1)) return fail("graph node " + g.id(w.f[u]) + " claimed twice");
    } else {
      for (int i = 0; i < static_cast<int>(w.contents[u].size()); ++i) {
        int x = w.contents[u][i];
        if (x < 0 || x >= g.n()) return fail("contents of " + p.ids[u] + " out of range");
        if (!claim(x, u, i)) return fail("graph node " + g.id(x) + " claimed twice");
      }
    }
  }
  for (int x = 0; x < g.n(); ++x)
    if (!owned[x]) return fail("graph node " + g.id(x) + " not covered");

  // Sequence contents must be a real path.
  for (int u = 0; u < p.n(); ++u) {
    if (!is_seq(p.kind(u))) continue;
    const auto& c = w.contents[u];
    for (size_t i = 0; i + 1 < c.size(); ++i)
      if (!g.has_edge(c[i], c[i + 1]))
        return fail("contents of " + p.ids[u] + " are not a path");
  }

  // Pattern edges between concrete endpoints must be present verbatim; no
  // rule can conjure an edge between surviving nodes.
  for (int e = 0; e < p.m(); ++e) {
    auto [a, b] = p.edges[e];
    if (p.kind(a) != NodeKind::Concrete || p.kind(b) != NodeKind::Concrete) continue;
    int idx = g.edge_index(w.f[a], w.f[b]);
    if (idx < 0 || !p.edge_constraints[e].eval(g.edge_attrs[idx]))
      return fail("missing edge " + p.ids[a] + "->" + p.ids[b]);
  }

  auto live = [&](int u) {
    return p.kind(u) == NodeKind::Concrete || !w.contents[u].empty();
  };
  auto all_empty = [&](const std::vector<int>& chain) {
    for (int z : chain)
      if (!w.contents[z].empty()) return false;
    return true;
  };
  // A chain is traversable when every Seq0Plus interior is empty; subgraph
  // 0+ interiors may be skipped regardless of their contents.
  auto chain_open = [&](const std::vector<int>& chain) {
    for (int z : chain)
      if (is_seq(p.kind(z)) && !w.contents[z].empty()) return false;
    return true;
  };

  std::vector<std::vector<Connection>> succs_of(p.n());
  for (int u = 0; u < p.n(); ++u) succs_of[u] = effective_succs(p, u);

  // Licenses justifying one real edge: pattern-level hops (src, dst, chain)
  // whose endpoints' slots are exit- and entry-capable and whose conjoined
  // hop constraints accept the edge attributes.
  struct License {
    int src_p, dst_p;
    const std::vector<int>* chain;
  };
  auto licenses_of = [&](int e) {
    std::vector<License> out;
    auto [x, y] = g.edges[e];
    const detail::Slot &sx = slot[x], &sy = slot[y];
    bool exit_ok = sx.pos == -1 || is_sub(p.kind(sx.p_node)) ||
                   sx.pos + 1 == static_cast<int>(w.contents[sx.p_node].size());
    bool entry_ok = sy.pos == -1 || is_sub(p.kind(sy.p_node)) || sy.pos == 0;
    if (!exit_ok || !entry_ok) return out;
    for (const auto& cn : succs_of[sx.p_node]) {
      if (cn.node != sy.p_node || !chain_open(cn.chain)) continue;
      std::vector<Constraint> hops;
      int prev = sx.p_node;
      for (int z : cn.chain) {
        hops.push_back(p.edge_constraints[p.edge_index(prev, z)]);
        prev = z;
      }
      hops.push_back(p.edge_constraints[p.edge_index(prev, cn.node)]);
      if (Constraint::conjunction(std::move(hops)).eval(g.edge_attrs[e]))
        out.push_back({sx.p_node, sy.p_node, &cn.chain});
    }
    return out;
  };

  std::vector<std::vector<License>> edge_lic(g.m());
  for (int e = 0; e < g.m(); ++e) {
    auto [x, y] = g.edges[e];
    const detail::Slot &sx = slot[x], &sy = slot[y];
    edge_lic[e] = licenses_of(e);
    bool internal = sx.pos >= 0 && sx.p_node == sy.p_node &&
                    (is_sub(p.kind(sx.p_node)) || sy.pos == sx.pos + 1);
    if (!internal && edge_lic[e].empty())
      return fail("edge " + g.id(x) + "->" + g.id(y) + " is not licensed");
  }

  // Obligation helpers over the licensed-edge table.
  auto has_exact = [&](int s, int wnode, const std::vector<int>& chain, bool into_w) {
    for (int e = 0; e < g.m(); ++e)
      for (const auto& l : edge_lic[e]) {
        if (*l.chain != chain) continue;
        if (into_w ? (l.src_p == s && l.dst_p == wnode) : (l.src_p == wnode && l.dst_p == s))
          return true;
      }
    return false;
  };
  auto has_through_from = [&](int s, const std::vector<int>& prefix) {
    for (int e = 0; e < g.m(); ++e)
      for (const auto& l : edge_lic[e]) {
        if (l.src_p != s || l.chain->size() < prefix.size()) continue;
        if (std::equal(prefix.begin(), prefix.end(), l.chain->begin())) return true;
      }
    return false;
  };
  auto has_through_to = [&](int t, const std::vector<int>& suffix) {
    for (int e = 0; e < g.m(); ++e)
      for (const auto& l : edge_lic[e]) {
        if (l.dst_p != t || l.chain->size() < suffix.size()) continue;
        if (std::equal(suffix.rbegin(), suffix.rend(), l.chain->rbegin())) return true;
      }
    return false;
  };

  for (int u = 0; u < p.n(); ++u) {
    if (p.kind(u) == NodeKind::Concrete) continue;
    auto preds = effective_preds(p, u);
    const auto& succs = succs_of[u];
    bool alive = !w.contents[u].empty();

    if (alive) {
      bool strict = is_one_plus(p.kind(u)) || is_seq(p.kind(u));
      for (const auto& cn : preds) {
        if (!live(cn.node) || !all_empty(cn.chain)) continue;
        if (has_exact(cn.node, u, cn.chain, true)) continue;
        std::vector<int> pre = cn.chain;
        pre.push_back(u);
        if (!strict && has_through_from(cn.node, pre)) continue;
        return fail("wildcard " + p.ids[u] + " lacks a real in-edge from " + p.ids[cn.node]);
      }
      for (const auto& cn : succs) {
        if (!live(cn.node) || !all_empty(cn.chain)) continue;
        if (has_exact(cn.node, u, cn.chain, false)) continue;
        std::vector<int> suf = cn.chain;
        suf.insert(suf.begin(), u);
        if (!strict && has_through_to(cn.node, suf)) continue;
        return fail("wildcard " + p.ids[u] + " lacks a real out-edge to " + p.ids[cn.node]);
      }
    } else if (is_zero_plus(p.kind(u))) {
      // Empty wildcard: live neighbors on both sides must be joined by a
      // real edge skipping it.
      for (const auto& cn : preds) {
        if (!live(cn.node) || !all_empty(cn.chain)) continue;
        bool beyond_live = false;
        for (const auto& b : succs)
          beyond_live |= (live(b.node) && all_empty(b.chain));
        if (!beyond_live) continue;
        std::vector<int> pre = cn.chain;
        pre.push_back(u);
        if (!has_through_from(cn.node, pre))
          return fail("empty wildcard " + p.ids[u] + " breaks connectivity after " +
                      p.ids[cn.node]);
      }
      for (const auto& cn : succs) {
        if (!live(cn.node) || !all_empty(cn.chain)) continue;
        bool before_live = false;
        for (const auto& b : preds)
          before_live |= (live(b.node) && all_empty(b.chain));
        if (!before_live) continue;
        std::vector<int> suf = cn.chain;
        suf.insert(suf.begin(), u);
        if (!has_through_to(cn.node, suf))
          return fail("empty wildcard " + p.ids[u] + " breaks connectivity into " +
                      p.ids[cn.node]);
      }
    }
  }

  for (const auto& pd : p.pairs)
    if (!pd.c.eval(g.node_attrs[w.f[pd.u]], g.node_attrs[w.f[pd.v]]))
      return fail("pair constraint fails on (" + p.ids[pd.u] + ", " + p.ids[pd.v] + ")");

  return std::nullopt;
}

inline bool valid_witness(const Pattern& p, const Graph& g, const MatchWitness& w) {
  return !check_witness(p, g, w).has_value();
}

}  // namespace regap

#pragma once

#include <utility>
#include <vector>

#include "regap/graph.hpp"

namespace regap {

struct MergeReport {
  std::vector<std::pair<std::string, std::string>> merged_pairs;
  int nodes_before = 0, nodes_after = 0;
  bool applied = false;

  json to_json() const {
    json pairs = json::array();
    for (const auto& [u, v] : merged_pairs) pairs.push_back(json::array({u, v}));
    return json{{"merged_pairs", std::move(pairs)},
                {"nodes_before", nodes_before},
                {"nodes_after", nodes_after},
                {"applied", applied}};
  }
};

namespace detail {

// accepts_some[x]: some concrete pattern constraint accepts graph node x.
inline std::vector<char> concrete_acceptance(const Pattern& p, const Graph& g) {
  std::vector<char> out(g.n(), 0);
  auto phi = node_phi_matrix(p, g);
  for (int i = 0; i < p.n(); ++i) {
    if (p.kind(i) != NodeKind::Concrete) continue;
    for (int x = 0; x < g.n(); ++x)
      if (phi[i][x]) out[x] = 1;
  }
  return out;
}

inline bool structurally_contractible(const Graph& g, int u, int v) {
  return u != v && g.in(v).size() == 1 && g.in(v)[0] == u && g.out(u).size() == 1 &&
         g.out(u)[0] == v;
}

}  // namespace detail

// Edges (u,v) contractible without changing matchability: neither endpoint is
// accepted by any concrete node constraint, (u,v) is v's sole in-edge and u's
// sole out-edge.
inline std::vector<std::pair<int, int>> mergeable_edges(const Graph& g, const Pattern& p) {
  if (p.has_wildcard_edge)
    throw std::invalid_argument("merge precondition: pattern has a wildcard-wildcard edge");
  std::vector<char> accepted = detail::concrete_acceptance(p, g);
  std::vector<std::pair<int, int>> out;
  for (auto [u, v] : g.edges)
    if (!accepted[u] && !accepted[v] && detail::structurally_contractible(g, u, v))
      out.push_back({u, v});
  return out;
}

// Contracts one edge: u disappears, every (w,u) is redirected to (w,v) and
// keeps (w,u)'s attributes; (u,v)'s own attributes are dropped.  Collisions
// cannot arise: any pre-existing (w,v) would violate the in-degree condition.
inline Graph merge_once(const Graph& g, const Pattern& p, const std::string& u_id,
                        const std::string& v_id) {
  int u = g.index_of(u_id), v = g.index_of(v_id);
  if (u < 0 || v < 0) throw std::invalid_argument("merge_once: unknown node id");
  auto ok = mergeable_edges(g, p);
  if (std::find(ok.begin(), ok.end(), std::pair{u, v}) == ok.end())
    throw std::invalid_argument("merge_once: edge (" + u_id + ", " + v_id + ") is not mergeable");

  std::vector<std::pair<std::string, AttrMap>> nodes;
  for (int i = 0; i < g.n(); ++i)
    if (i != u) nodes.emplace_back(g.id(i), g.node_attrs[i]);
  std::vector<std::tuple<std::string, std::string, AttrMap>> edges;
  for (int e = 0; e < g.m(); ++e) {
    auto [a, b] = g.edges[e];
    if (a == u) continue;  // u's sole out-edge is the contracted one
    if (b == u)
      edges.emplace_back(g.id(a), v_id, g.edge_attrs[e]);
    else
      edges.emplace_back(g.id(a), g.id(b), g.edge_attrs[e]);
  }
  return Graph::make(std::move(nodes), std::move(edges));
}

// Repeats merge_once until no edge qualifies, always taking the first edge in
// sorted-id order so runs are reproducible.  No-ops (applied=false) when the
// pattern has a wildcard-wildcard edge.
inline std::pair<Graph, MergeReport> merge_fixpoint(Graph g, const Pattern& p) {
  MergeReport report;
  report.nodes_before = g.n();
  if (p.has_wildcard_edge) {
    report.nodes_after = g.n();
    return {std::move(g), report};
  }
  report.applied = true;
  for (;;) {
    auto edges = mergeable_edges(g, p);
    if (edges.empty()) break;
    auto [u, v] = edges.front();
    std::string u_id = g.id(u), v_id = g.id(v);
    g = merge_once(g, p, u_id, v_id);
    report.merged_pairs.emplace_back(std::move(u_id), std::move(v_id));
  }
  report.nodes_after = g.n();
  return {std::move(g), report};
}

}  // namespace regap

#pragma once

#include <algorithm>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "regap/constraints.hpp"

namespace regap {

enum class NodeKind { Concrete, Seq0Plus, Seq1Plus, Sub0Plus, Sub1Plus };

inline bool is_wildcard(NodeKind k) { return k != NodeKind::Concrete; }
inline bool is_seq(NodeKind k) { return k == NodeKind::Seq0Plus || k == NodeKind::Seq1Plus; }
inline bool is_sub(NodeKind k) { return k == NodeKind::Sub0Plus || k == NodeKind::Sub1Plus; }
inline bool is_one_plus(NodeKind k) { return k == NodeKind::Seq1Plus || k == NodeKind::Sub1Plus; }
inline bool is_zero_plus(NodeKind k) { return k == NodeKind::Seq0Plus || k == NodeKind::Sub0Plus; }

inline const char* kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::Concrete: return "concrete";
    case NodeKind::Seq0Plus: return "seq0plus";
    case NodeKind::Seq1Plus: return "seq1plus";
    case NodeKind::Sub0Plus: return "sub0plus";
    case NodeKind::Sub1Plus: return "sub1plus";
  }
  return "concrete";
}

inline NodeKind kind_from_name(const std::string& s) {
  if (s == "concrete") return NodeKind::Concrete;
  if (s == "seq0plus") return NodeKind::Seq0Plus;
  if (s == "seq1plus") return NodeKind::Seq1Plus;
  if (s == "sub0plus") return NodeKind::Sub0Plus;
  if (s == "sub1plus") return NodeKind::Sub1Plus;
  throw ParseError("unknown wildcard kind \"" + s + "\"");
}

// Attributed simple digraph.  Nodes are indexed densely in sorted-id order so
// that everything downstream (variable numbering, file output) is reproducible.
struct Graph {
  std::vector<std::string> ids;           // sorted, unique; position = dense index
  std::vector<AttrMap> node_attrs;        // by node index
  std::vector<std::pair<int, int>> edges;  // lexicographically sorted, unique
  std::vector<AttrMap> edge_attrs;        // by edge index
  std::vector<std::vector<int>> out_adj, in_adj;  // sorted neighbor indices

  int n() const { return static_cast<int>(ids.size()); }
  int m() const { return static_cast<int>(edges.size()); }
  const std::string& id(int i) const { return ids[i]; }

  int index_of(const std::string& node_id) const {
    auto it = std::lower_bound(ids.begin(), ids.end(), node_id);
    if (it == ids.end() || *it != node_id) return -1;
    return static_cast<int>(it - ids.begin());
  }

  int edge_index(int u, int v) const {
    auto it = std::lower_bound(edges.begin(), edges.end(), std::pair{u, v});
    if (it == edges.end() || *it != std::pair{u, v}) return -1;
    return static_cast<int>(it - edges.begin());
  }

  bool has_edge(int u, int v) const { return edge_index(u, v) >= 0; }
  const std::vector<int>& out(int u) const { return out_adj[u]; }
  const std::vector<int>& in(int v) const { return in_adj[v]; }

  // Assembles a validated graph from unordered parts.
  static Graph make(std::vector<std::pair<std::string, AttrMap>> nodes,
                    std::vector<std::tuple<std::string, std::string, AttrMap>> edge_list) {
    Graph g;
    std::sort(nodes.begin(), nodes.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [nid, attrs] : nodes) {
      if (!g.ids.empty() && g.ids.back() == nid) throw ParseError("duplicate node id \"" + nid + "\"");
      g.ids.push_back(std::move(nid));
      g.node_attrs.push_back(std::move(attrs));
    }
    std::vector<std::pair<std::pair<int, int>, AttrMap>> es;
    for (auto& [src, dst, attrs] : edge_list) {
      int u = g.index_of(src), v = g.index_of(dst);
      if (u < 0) throw ParseError("edge endpoint \"" + src + "\" is not a node");
      if (v < 0) throw ParseError("edge endpoint \"" + dst + "\" is not a node");
      es.push_back({{u, v}, std::move(attrs)});
    }
    std::sort(es.begin(), es.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [uv, attrs] : es) {
      if (!g.edges.empty() && g.edges.back() == uv)
        throw ParseError("duplicate edge " + g.ids[uv.first] + " -> " + g.ids[uv.second]);
      g.edges.push_back(uv);
      g.edge_attrs.push_back(std::move(attrs));
    }
    g.out_adj.assign(g.n(), {});
    g.in_adj.assign(g.n(), {});
    for (auto [u, v] : g.edges) {
      g.out_adj[u].push_back(v);
      g.in_adj[v].push_back(u);
    }
    for (auto& a : g.in_adj) std::sort(a.begin(), a.end());
    return g;
  }

  static Graph from_json(const json& j) {
    if (!j.is_object() || !j.contains("nodes") || !j.at("nodes").is_array())
      throw ParseError("graph document needs a \"nodes\" array");
    std::vector<std::pair<std::string, AttrMap>> nodes;
    for (const auto& nj : j.at("nodes")) {
      if (!nj.is_object() || !nj.contains("id") || !nj.at("id").is_string())
        throw ParseError("graph node needs a string \"id\"");
      nodes.emplace_back(nj.at("id").get<std::string>(),
                         attrs_from_json(nj.value("attrs", json(nullptr))));
    }
    std::vector<std::tuple<std::string, std::string, AttrMap>> edge_list;
    if (j.contains("edges")) {
      if (!j.at("edges").is_array()) throw ParseError("\"edges\" must be an array");
      for (const auto& ej : j.at("edges")) {
        if (!ej.is_object() || !ej.contains("src") || !ej.contains("dst") ||
            !ej.at("src").is_string() || !ej.at("dst").is_string())
          throw ParseError("graph edge needs string \"src\" and \"dst\"");
        edge_list.emplace_back(ej.at("src").get<std::string>(), ej.at("dst").get<std::string>(),
                               attrs_from_json(ej.value("attrs", json(nullptr))));
      }
    }
    return make(std::move(nodes), std::move(edge_list));
  }

  json to_json() const {
    json nodes = json::array();
    for (int i = 0; i < n(); ++i) {
      json nj = {{"id", ids[i]}};
      if (!node_attrs[i].empty()) nj["attrs"] = attrs_to_json(node_attrs[i]);
      nodes.push_back(std::move(nj));
    }
    json es = json::array();
    for (int e = 0; e < m(); ++e) {
      json ej = {{"src", ids[edges[e].first]}, {"dst", ids[edges[e].second]}};
      if (!edge_attrs[e].empty()) ej["attrs"] = attrs_to_json(edge_attrs[e]);
      es.push_back(std::move(ej));
    }
    return json{{"nodes", std::move(nodes)}, {"edges", std::move(es)}};
  }
};

inline std::vector<std::string> neighbors(const Graph& g, const std::string& node_id, bool outgoing) {
  int i = g.index_of(node_id);
  if (i < 0) throw ParseError("unknown node id \"" + node_id + "\"");
  std::vector<std::string> out;
  for (int j : outgoing ? g.out(i) : g.in(i)) out.push_back(g.id(j));
  return out;
}

// Pair constraint pinned to dense node indices (u != v, both concrete).
struct PairDecl {
  int u = -1, v = -1;
  PairConstraint c;
};

// Pattern graph.  Structure lives in the Graph base; node attrs stay empty.
// Constraints are indexed parallel to nodes/edges, True where absent.
struct Pattern : Graph {
  std::vector<NodeKind> kinds;
  std::vector<Constraint> node_constraints;
  std::vector<Constraint> edge_constraints;
  std::vector<PairDecl> pairs;
  bool has_wildcard_edge = false;

  NodeKind kind(int i) const { return kinds[i]; }

  int num_concrete() const {
    return static_cast<int>(std::count(kinds.begin(), kinds.end(), NodeKind::Concrete));
  }

  std::vector<int> wildcards() const {
    std::vector<int> w;
    for (int i = 0; i < n(); ++i)
      if (is_wildcard(kinds[i])) w.push_back(i);
    return w;
  }

  void recompute_wildcard_edge_flag() {
    has_wildcard_edge = false;
    for (auto [u, v] : edges)
      if (is_wildcard(kinds[u]) && is_wildcard(kinds[v])) has_wildcard_edge = true;
  }

  static Pattern from_json(const json& j) {
    Pattern p;
    static_cast<Graph&>(p) = Graph::from_json(j);
    p.kinds.assign(p.n(), NodeKind::Concrete);
    p.node_constraints.assign(p.n(), Constraint::make_true());
    p.edge_constraints.assign(p.m(), Constraint::make_true());

    for (const auto& nj : j.at("nodes")) {
      int i = p.index_of(nj.at("id").get<std::string>());
      if (nj.contains("kind")) {
        if (!nj.at("kind").is_string()) throw ParseError("node \"kind\" must be a string");
        p.kinds[i] = kind_from_name(nj.at("kind").get<std::string>());
      }
      if (nj.contains("constraint")) {
        if (is_wildcard(p.kinds[i]))
          throw ParseError("node constraint attached to wildcard \"" + p.ids[i] + "\"");
        p.node_constraints[i] = Constraint::parse(nj.at("constraint"));
      }
    }
    if (j.contains("edges")) {
      for (const auto& ej : j.at("edges")) {
        if (!ej.contains("constraint")) continue;
        int u = p.index_of(ej.at("src").get<std::string>());
        int v = p.index_of(ej.at("dst").get<std::string>());
        p.edge_constraints[p.edge_index(u, v)] = Constraint::parse(ej.at("constraint"));
      }
    }
    if (j.contains("pair_constraints")) {
      if (!j.at("pair_constraints").is_array())
        throw ParseError("\"pair_constraints\" must be an array");
      for (const auto& pj : j.at("pair_constraints")) {
        if (!pj.is_object() || !pj.contains("u") || !pj.contains("v") || !pj.contains("constraint") ||
            !pj.at("u").is_string() || !pj.at("v").is_string())
          throw ParseError("pair constraint entry needs \"u\", \"v\", \"constraint\"");
        const std::string uid = pj.at("u").get<std::string>();
        const std::string vid = pj.at("v").get<std::string>();
        int u = p.index_of(uid), v = p.index_of(vid);
        if (u < 0 || v < 0) throw ParseError("pair constraint references unknown node");
        if (u == v) throw ParseError("pair constraint endpoints must differ");
        if (is_wildcard(p.kinds[u]) || is_wildcard(p.kinds[v]))
          throw ParseError("pair constraint touches wildcard node");
        for (const auto& prev : p.pairs)
          if (prev.u == u && prev.v == v)
            throw ParseError("duplicate pair constraint on (" + uid + ", " + vid + ")");
        p.pairs.push_back({u, v, PairConstraint::parse(pj.at("constraint"), uid, vid)});
      }
      std::sort(p.pairs.begin(), p.pairs.end(), [](const PairDecl& a, const PairDecl& b) {
        return std::pair{a.u, a.v} < std::pair{b.u, b.v};
      });
    }
    p.recompute_wildcard_edge_flag();
    return p;
  }

  json to_json() const {
    json nodes = json::array();
    for (int i = 0; i < n(); ++i) {
      json nj = {{"id", ids[i]}, {"kind", kind_name(kinds[i])}};
      if (!node_constraints[i].is_true()) nj["constraint"] = node_constraints[i].to_json();
      nodes.push_back(std::move(nj));
    }
    json es = json::array();
    for (int e = 0; e < m(); ++e) {
      json ej = {{"src", ids[edges[e].first]}, {"dst", ids[edges[e].second]}};
      if (!edge_constraints[e].is_true()) ej["constraint"] = edge_constraints[e].to_json();
      es.push_back(std::move(ej));
    }
    json out = {{"nodes", std::move(nodes)}, {"edges", std::move(es)}};
    if (!pairs.empty()) {
      json pc = json::array();
      for (const auto& pd : pairs)
        pc.push_back({{"u", ids[pd.u]},
                      {"v", ids[pd.v]},
                      {"constraint", pd.c.to_json(ids[pd.u], ids[pd.v])}});
      out["pair_constraints"] = std::move(pc);
    }
    return out;
  }
};

// phi[i][x]: pattern node i's constraint accepts graph node x's attributes.
// Wildcard rows are all-true (their constraint is True).  Computed once and
// shared between the preprocessor and the encoder.
inline std::vector<std::vector<char>> node_phi_matrix(const Pattern& p, const Graph& g) {
  std::vector<std::vector<char>> phi(p.n(), std::vector<char>(g.n(), 0));
  for (int i = 0; i < p.n(); ++i)
    for (int x = 0; x < g.n(); ++x)
      phi[i][x] = p.node_constraints[i].eval(g.node_attrs[x]) ? 1 : 0;
  return phi;
}

}  // namespace regap

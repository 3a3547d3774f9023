#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "regap/cnf.hpp"
#include "regap/expand.hpp"
#include "regap/witness.hpp"

namespace regap {

struct EncodeOptions {
  int k = 0;  // 0 selects the safe bound automatically
};

struct EncodeResult {
  CnfFormula cnf;
  ExpandedPattern ep;
  RewrittenPattern rw;
  int k = 1;
  bool k_incomplete = false;

  std::vector<int> o_var;               // per expanded node
  std::vector<std::vector<int>> m_var;  // [expanded node][graph node]
  std::vector<int> c_var;               // per expanded edge
  std::vector<int> alive_var;           // per rp node, subgraph wildcards only
  int contradiction = 0;                // 0 while unused

  json var_map(const Graph& g) const {
    json o = json::object(), m = json::object(), c = json::object(), a = json::object();
    for (int e = 0; e < ep.n_exp(); ++e) o[ep.nodes[e].name] = o_var[e];
    for (int e = 0; e < ep.n_exp(); ++e)
      for (int x = 0; x < g.n(); ++x) m[ep.nodes[e].name + "|" + g.id(x)] = m_var[e][x];
    for (size_t i = 0; i < ep.edges.size(); ++i) {
      const auto& ed = ep.edges[i];
      std::string key = ep.nodes[ed.src].name + ">" + ep.nodes[ed.dst].name;
      if (!ed.chain.empty()) {
        key += "@";
        for (size_t j = 0; j < ed.chain.size(); ++j)
          key += (j ? "," : "") + ep.rp.ids[ed.chain[j]];
      }
      if (ed.is_mid()) key += "!mid";
      c[key] = c_var[i];
    }
    for (int u = 0; u < ep.rp.n(); ++u)
      if (alive_var[u]) a[ep.rp.ids[u]] = alive_var[u];
    json out{{"o", std::move(o)}, {"m", std::move(m)}, {"c", std::move(c)},
             {"alive", std::move(a)}};
    if (contradiction) out["contradiction"] = contradiction;
    return out;
  }
};

namespace detail {

class Encoder {
 public:
  Encoder(const Pattern& p, const Graph& g, EncodeOptions opt) : g_(g) {
    r_.rw = rewrite_seq1plus_mapped(p);
    r_.k = choose_k(g, opt.k, &r_.k_incomplete);
    r_.ep = expand(r_.rw.p, g, r_.k);
  }

  EncodeResult run() {
    allocate();
    emit_mapping();
    emit_licensing();
    emit_sequence();
    emit_subgraph();
    emit_obligations();
    emit_attributes();
    return std::move(r_);
  }

 private:
  const Graph& g_;
  EncodeResult r_;
  std::map<std::pair<int, int>, std::vector<int>> by_endpoints_;  // (src,dst) -> edge idx
  std::map<std::pair<int, int>, int> mid_var_;                    // (src,dst) -> c var

  const Pattern& rp() const { return r_.ep.rp; }

  void allocate() {
    auto& cnf = r_.cnf;
    const auto& ep = r_.ep;
    const long long budget = 1LL << 31;
    long long need = static_cast<long long>(ep.n_exp()) * (1 + g_.n()) + ep.edges.size();
    if (need >= budget) throw std::overflow_error("encoding exceeds the variable budget");

    r_.o_var.resize(ep.n_exp());
    for (int e = 0; e < ep.n_exp(); ++e) r_.o_var[e] = cnf.new_var();
    r_.m_var.assign(ep.n_exp(), std::vector<int>(g_.n()));
    for (int e = 0; e < ep.n_exp(); ++e)
      for (int x = 0; x < g_.n(); ++x) r_.m_var[e][x] = cnf.new_var();
    r_.c_var.resize(ep.edges.size());
    for (size_t i = 0; i < ep.edges.size(); ++i) r_.c_var[i] = cnf.new_var();
    r_.alive_var.assign(rp().n(), 0);
    for (int u = 0; u < rp().n(); ++u)
      if (is_sub(rp().kind(u))) r_.alive_var[u] = cnf.new_var();

    for (size_t i = 0; i < ep.edges.size(); ++i) {
      const auto& ed = ep.edges[i];
      by_endpoints_[{ed.src, ed.dst}].push_back(static_cast<int>(i));
      if (ed.is_mid() && is_seq(rp().kind(ep.nodes[ed.src].origin)))
        mid_var_[{ed.src, ed.dst}] = r_.c_var[i];
    }
  }

  int contradiction_lit() {
    if (!r_.contradiction) {
      r_.contradiction = r_.cnf.new_var();
      r_.cnf.add_clause({-r_.contradiction});
    }
    return r_.contradiction;
  }

  void add(std::vector<int> c) { r_.cnf.add_clause(std::move(c)); }

  // guards ∨ (disjunction); when both sides are empty the clause degenerates
  // to the pinned-false literal, making the formula unsatisfiable.
  void add_guarded(std::vector<int> guards, const std::vector<int>& disj) {
    guards.insert(guards.end(), disj.begin(), disj.end());
    if (guards.empty()) guards.push_back(contradiction_lit());
    add(std::move(guards));
  }

  void add_amo(const std::vector<int>& lits) {
    auto strat = lits.size() <= 8 ? AmoStrategy::Pairwise : AmoStrategy::Sequential;
    for (auto& cl : amo(lits, strat, r_.cnf)) add(std::move(cl));
  }

  // 0 when the node is unconditionally live (concrete).
  int liveness_var(int u) const {
    switch (rp().kind(u)) {
      case NodeKind::Concrete: return 0;
      case NodeKind::Seq0Plus: return r_.o_var[r_.ep.exp_of[u].front()];
      default: return r_.alive_var[u];
    }
  }

  void push_connection_guards(std::vector<int>& cl, int other, const std::vector<int>& chain) {
    if (int lv = liveness_var(other)) cl.push_back(-lv);
    for (int z : chain) cl.push_back(liveness_var(z));
  }

  std::vector<int> licenses(int s, int d, const std::vector<int>& chain) const {
    std::vector<int> out;
    const auto& ep = r_.ep;
    for (size_t i = 0; i < ep.edges.size(); ++i) {
      const auto& ed = ep.edges[i];
      if (ed.variant != 0 || ep.nodes[ed.src].origin != s || ep.nodes[ed.dst].origin != d)
        continue;
      if (ed.chain == chain) out.push_back(r_.c_var[i]);
    }
    return out;
  }

  std::vector<int> through_from(int s, const std::vector<int>& prefix) const {
    std::vector<int> out;
    const auto& ep = r_.ep;
    for (size_t i = 0; i < ep.edges.size(); ++i) {
      const auto& ed = ep.edges[i];
      if (ed.variant != 0 || ep.nodes[ed.src].origin != s) continue;
      if (ed.chain.size() < prefix.size()) continue;
      if (std::equal(prefix.begin(), prefix.end(), ed.chain.begin()))
        out.push_back(r_.c_var[i]);
    }
    return out;
  }

  std::vector<int> through_to(int t, const std::vector<int>& suffix) const {
    std::vector<int> out;
    const auto& ep = r_.ep;
    for (size_t i = 0; i < ep.edges.size(); ++i) {
      const auto& ed = ep.edges[i];
      if (ed.variant != 0 || ep.nodes[ed.dst].origin != t) continue;
      if (ed.chain.size() < suffix.size()) continue;
      if (std::equal(suffix.rbegin(), suffix.rend(), ed.chain.rbegin()))
        out.push_back(r_.c_var[i]);
    }
    return out;
  }

  // Occupancy and mapping: o_e <-> some m_e,x, at-most-one per row and column,
  // concrete nodes mandatory, every graph node covered.
  void emit_mapping() {
    const auto& ep = r_.ep;
    for (int e = 0; e < ep.n_exp(); ++e) {
      std::vector<int> any{-r_.o_var[e]};
      for (int x = 0; x < g_.n(); ++x) any.push_back(r_.m_var[e][x]);
      add(std::move(any));
      for (int x = 0; x < g_.n(); ++x) add({-r_.m_var[e][x], r_.o_var[e]});
    }
    for (int e = 0; e < ep.n_exp(); ++e) add_amo(r_.m_var[e]);
    for (int x = 0; x < g_.n(); ++x) {
      std::vector<int> col(ep.n_exp());
      for (int e = 0; e < ep.n_exp(); ++e) col[e] = r_.m_var[e][x];
      add_amo(col);
    }
    for (int e = 0; e < ep.n_exp(); ++e)
      if (rp().kind(ep.nodes[e].origin) == NodeKind::Concrete) add({r_.o_var[e]});
    for (int x = 0; x < g_.n(); ++x) {
      std::vector<int> cover;
      for (int e = 0; e < ep.n_exp(); ++e) cover.push_back(r_.m_var[e][x]);
      add_guarded({}, cover);
    }
  }

  // Connection semantics: a chosen edge pins both endpoints to a real graph
  // edge its constraint accepts, and every real edge between mapped nodes
  // needs some accepting chosen edge.
  void emit_licensing() {
    const auto& ep = r_.ep;
    for (size_t i = 0; i < ep.edges.size(); ++i) {
      const auto& ed = ep.edges[i];
      int c = r_.c_var[i];
      if (ed.src == ed.dst) {
        for (int x = 0; x < g_.n(); ++x)
          if (!g_.has_edge(x, x) || !ed.phi.eval(g_.edge_attrs[g_.edge_index(x, x)]))
            add({-r_.m_var[ed.src][x], -c});
      } else {
        for (int x = 0; x < g_.n(); ++x)
          for (int y = 0; y < g_.n(); ++y) {
            if (x == y) continue;
            if (!g_.has_edge(x, y) || !ed.phi.eval(g_.edge_attrs[g_.edge_index(x, y)]))
              add({-r_.m_var[ed.src][x], -r_.m_var[ed.dst][y], -c});
          }
      }
      add({-c, r_.o_var[ed.src]});
      add({-c, r_.o_var[ed.dst]});
    }

    // Edges between two concrete slots admit no slack: the connection is the
    // pattern edge itself.
    for (size_t i = 0; i < ep.edges.size(); ++i) {
      const auto& ed = ep.edges[i];
      if (ed.variant != 0 || !ed.chain.empty()) continue;
      if (rp().kind(ep.nodes[ed.src].origin) == NodeKind::Concrete &&
          rp().kind(ep.nodes[ed.dst].origin) == NodeKind::Concrete)
        add({r_.c_var[i]});
    }

    for (int e = 0; e < g_.m(); ++e) {
      auto [x, y] = g_.edges[e];
      const AttrMap& attrs = g_.edge_attrs[e];
      auto accepting = [&](int s, int d) {
        std::vector<int> acc;
        auto it = by_endpoints_.find({s, d});
        if (it == by_endpoints_.end()) return acc;
        for (int i : it->second)
          if (ep.edges[i].phi.eval(attrs)) acc.push_back(r_.c_var[i]);
        return acc;
      };
      if (x == y) {
        for (int s = 0; s < ep.n_exp(); ++s)
          add_guarded({-r_.m_var[s][x]}, accepting(s, s));
      } else {
        for (int s = 0; s < ep.n_exp(); ++s)
          for (int d = 0; d < ep.n_exp(); ++d) {
            if (s == d) continue;
            add_guarded({-r_.m_var[s][x], -r_.m_var[d][y]}, accepting(s, d));
          }
      }
    }
  }

  // Sequence slots fill as a prefix, consecutive filled slots ride a real
  // edge, and only the last filled slot may exit.  Skip edges require every
  // sequence wildcard they jump over to be empty.
  void emit_sequence() {
    const auto& ep = r_.ep;
    for (int u = 0; u < rp().n(); ++u) {
      if (!is_seq(rp().kind(u))) continue;
      const auto& slots = ep.exp_of[u];
      for (size_t j = 1; j < slots.size(); ++j) {
        add({-r_.o_var[slots[j]], r_.o_var[slots[j - 1]]});
        add({-r_.o_var[slots[j]], mid_var_.at({slots[j - 1], slots[j]})});
      }
      for (size_t j = 0; j + 1 < slots.size(); ++j) {
        int killer = r_.o_var[slots[j + 1]];
        for (size_t i = 0; i < ep.edges.size(); ++i)
          if (ep.edges[i].variant == 0 && ep.edges[i].src == slots[j])
            add({-killer, -r_.c_var[i]});
      }
    }
    for (size_t i = 0; i < ep.edges.size(); ++i)
      for (int z : ep.edges[i].chain)
        if (is_seq(rp().kind(z)))
          add({-r_.c_var[i], -r_.o_var[ep.exp_of[z].front()]});
  }

  void emit_subgraph() {
    const auto& ep = r_.ep;
    for (int u = 0; u < rp().n(); ++u) {
      if (!is_sub(rp().kind(u))) continue;
      int a = r_.alive_var[u];
      std::vector<int> any;
      for (int e : ep.exp_of[u]) any.push_back(r_.o_var[e]);
      add_guarded({-a}, any);
      for (int e : ep.exp_of[u]) add({-r_.o_var[e], a});
      if (rp().kind(u) == NodeKind::Sub1Plus) add_guarded({}, any);
    }
  }

  void emit_obligations() {
    for (int u = 0; u < rp().n(); ++u) {
      switch (rp().kind(u)) {
        case NodeKind::Seq0Plus: {
          int head_o = r_.o_var[r_.ep.exp_of[u].front()];
          emit_alive_connections(u, {-head_o}, false);
          emit_empty_connections(u, head_o);
          break;
        }
        case NodeKind::Sub1Plus:
          emit_alive_connections(u, {}, false);
          break;
        case NodeKind::Sub0Plus:
          emit_alive_connections(u, {-r_.alive_var[u]}, true);
          emit_empty_connections(u, r_.alive_var[u]);
          break;
        default: break;
      }
    }
  }

  // While the wildcard holds content, every effective neighbor must reach it
  // by a real edge; 0+ subgraph wildcards may instead be bypassed outright.
  void emit_alive_connections(int u, std::vector<int> base_guards, bool bypass) {
    for (const auto& cn : effective_preds(rp(), u)) {
      std::vector<int> cl = base_guards;
      push_connection_guards(cl, cn.node, cn.chain);
      std::vector<int> disj = licenses(cn.node, u, cn.chain);
      if (bypass) {
        std::vector<int> pre = cn.chain;
        pre.push_back(u);
        for (int c : through_from(cn.node, pre)) disj.push_back(c);
      }
      add_guarded(std::move(cl), disj);
    }
    for (const auto& cn : effective_succs(rp(), u)) {
      std::vector<int> cl = base_guards;
      push_connection_guards(cl, cn.node, cn.chain);
      std::vector<int> disj = licenses(u, cn.node, cn.chain);
      if (bypass) {
        std::vector<int> suf = cn.chain;
        suf.insert(suf.begin(), u);
        for (int c : through_to(cn.node, suf)) disj.push_back(c);
      }
      add_guarded(std::move(cl), disj);
    }
  }

  // While the wildcard is empty, live neighbors on opposite sides must be
  // joined by a real edge that skips it.
  void emit_empty_connections(int u, int alive_v) {
    auto preds = effective_preds(rp(), u);
    auto succs = effective_succs(rp(), u);
    for (const auto& cn : preds) {
      std::vector<int> pre = cn.chain;
      pre.push_back(u);
      std::vector<int> disj = through_from(cn.node, pre);
      for (const auto& b : succs) {
        std::vector<int> cl{alive_v};
        push_connection_guards(cl, cn.node, cn.chain);
        push_connection_guards(cl, b.node, b.chain);
        add_guarded(std::move(cl), disj);
      }
    }
    for (const auto& cn : succs) {
      std::vector<int> suf = cn.chain;
      suf.insert(suf.begin(), u);
      std::vector<int> disj = through_to(cn.node, suf);
      for (const auto& b : preds) {
        std::vector<int> cl{alive_v};
        push_connection_guards(cl, cn.node, cn.chain);
        push_connection_guards(cl, b.node, b.chain);
        add_guarded(std::move(cl), disj);
      }
    }
  }

  void emit_attributes() {
    const auto& ep = r_.ep;
    for (int u = 0; u < rp().n(); ++u) {
      if (rp().kind(u) != NodeKind::Concrete) continue;
      const Constraint& c = rp().node_constraints[u];
      if (c.is_true()) continue;
      int e = ep.exp_of[u].front();
      for (int x = 0; x < g_.n(); ++x)
        if (!c.eval(g_.node_attrs[x])) add({-r_.m_var[e][x]});
    }
    for (const auto& pd : rp().pairs) {
      int eu = ep.exp_of[pd.u].front(), ev = ep.exp_of[pd.v].front();
      for (int x = 0; x < g_.n(); ++x) {
        std::vector<int> disj;
        for (int y = 0; y < g_.n(); ++y)
          if (y != x && pd.c.eval(g_.node_attrs[x], g_.node_attrs[y]))
            disj.push_back(r_.m_var[ev][y]);
        add_guarded({-r_.m_var[eu][x]}, disj);
      }
    }
  }
};

}  // namespace detail

inline EncodeResult encode(const Pattern& p, const Graph& g, EncodeOptions opt = {}) {
  return detail::Encoder(p, g, opt).run();
}

// Reads a satisfying assignment back into a witness over the original
// pattern.  Throws when the model violates an encoding invariant or the
// reconstructed witness fails the semantic check.
inline MatchWitness decode_model(const EncodeResult& r, const Pattern& original, const Graph& g,
                                 const std::vector<bool>& model) {
  const auto& ep = r.ep;
  auto mapped_to = [&](int e) {
    int found = -1;
    for (int x = 0; x < g.n(); ++x) {
      if (!model[r.m_var[e][x]]) continue;
      if (found >= 0) throw std::logic_error("model maps one slot to two graph nodes");
      found = x;
    }
    if (found < 0) throw std::logic_error("occupied slot " + ep.nodes[e].name + " is unmapped");
    return found;
  };
  auto seq_contents = [&](int u_rp) {
    std::vector<int> out;
    bool ended = false;
    for (int e : ep.exp_of[u_rp]) {
      if (!model[r.o_var[e]]) {
        ended = true;
        continue;
      }
      if (ended) throw std::logic_error("sequence slots are not a prefix");
      out.push_back(mapped_to(e));
    }
    return out;
  };

  MatchWitness w;
  w.f.assign(original.n(), -1);
  w.contents.resize(original.n());
  for (int i = 0; i < original.n(); ++i) {
    if (original.kind(i) == NodeKind::Seq1Plus) {
      int h = r.rw.head_of[i], t = r.rw.tail_of[i];
      w.contents[i].push_back(mapped_to(ep.exp_of[h].front()));
      for (int x : seq_contents(t)) w.contents[i].push_back(x);
      continue;
    }
    int u_rp = r.rw.p.index_of(original.ids[i]);
    switch (original.kind(i)) {
      case NodeKind::Concrete:
        w.f[i] = mapped_to(ep.exp_of[u_rp].front());
        break;
      case NodeKind::Seq0Plus:
        w.contents[i] = seq_contents(u_rp);
        break;
      default:
        for (int e : ep.exp_of[u_rp])
          if (model[r.o_var[e]]) w.contents[i].push_back(mapped_to(e));
        std::sort(w.contents[i].begin(), w.contents[i].end());
        break;
    }
  }

  if (auto err = check_witness(original, g, w))
    throw std::logic_error("decoded witness rejected: " + *err);
  return w;
}

}  // namespace regap

#include "regap/expand.hpp"

#include <gtest/gtest.h>

#include "support/test_util.hpp"

using namespace regap;
using regap::test::graph_of;

namespace {

Pattern pattern_of(const json& doc) { return Pattern::from_json(doc); }

std::vector<std::string> names(const ExpandedPattern& ep) {
  std::vector<std::string> out;
  for (const auto& nd : ep.nodes) out.push_back(nd.name);
  return out;
}

int count_variant(const ExpandedPattern& ep, int variant) {
  int c = 0;
  for (const auto& e : ep.edges) c += (e.variant == variant);
  return c;
}

}  // namespace

TEST(ChooseK, DefaultsToGraphSize) {
  Graph g = graph_of({"a", "b", "c"}, {{"a", "b"}});
  bool inc = true;
  EXPECT_EQ(choose_k(g, 0, &inc), 3);
  EXPECT_FALSE(inc);
}

TEST(ChooseK, EmptyGraphStillPositive) {
  Graph g = graph_of({}, {});
  EXPECT_EQ(choose_k(g), 1);
}

TEST(ChooseK, OverrideBelowGraphSizeFlagsIncomplete) {
  Graph g = graph_of({"a", "b", "c", "d"}, {});
  bool inc = false;
  EXPECT_EQ(choose_k(g, 2, &inc), 2);
  EXPECT_TRUE(inc);
  EXPECT_EQ(choose_k(g, 4, &inc), 4);
  EXPECT_FALSE(inc);
  EXPECT_EQ(choose_k(g, 9, &inc), 9);
  EXPECT_FALSE(inc);
}

TEST(ChooseK, RejectsNonPositiveOverride) {
  Graph g = graph_of({"a"}, {});
  EXPECT_THROW(choose_k(g, -1), std::invalid_argument);
}

TEST(RewriteSeq1Plus, NoOpWithoutSeq1Plus) {
  Pattern p = pattern_of({{"nodes", {{{"id", "A"}}, {{"id", "W"}, {"kind", "seq0plus"}}}},
                          {"edges", {{{"src", "A"}, {"dst", "W"}}}}});
  Pattern r = rewrite_seq1plus(p);
  EXPECT_EQ(r.to_json(), p.to_json());
}

TEST(RewriteSeq1Plus, SplitsIntoHeadAndTail) {
  Pattern p = pattern_of(
      {{"nodes", {{{"id", "A"}}, {{"id", "S"}, {"kind", "seq1plus"}}, {{"id", "B"}}}},
       {"edges",
        {{{"src", "A"}, {"dst", "S"}, {"constraint", {{"op", "has"}, {"attr", "w"}}}},
         {{"src", "S"}, {"dst", "B"}}}}});
  Pattern r = rewrite_seq1plus(p);

  ASSERT_EQ(r.n(), 4);
  EXPECT_EQ(r.ids, (std::vector<std::string>{"A", "B", "S#head", "S#tail"}));
  EXPECT_EQ(r.kind(r.index_of("S#head")), NodeKind::Concrete);
  EXPECT_EQ(r.kind(r.index_of("S#tail")), NodeKind::Seq0Plus);

  int a = r.index_of("A"), b = r.index_of("B");
  int h = r.index_of("S#head"), t = r.index_of("S#tail");
  ASSERT_TRUE(r.has_edge(a, h));
  ASSERT_TRUE(r.has_edge(h, t));
  ASSERT_TRUE(r.has_edge(t, b));
  EXPECT_EQ(r.m(), 3);

  // In-edge constraint follows the head, the head-tail link is free.
  AttrMap with_w{{"w", AttrValue{int64_t{1}}}};
  EXPECT_FALSE(r.edge_constraints[r.edge_index(a, h)].eval({}));
  EXPECT_TRUE(r.edge_constraints[r.edge_index(a, h)].eval(with_w));
  EXPECT_TRUE(r.edge_constraints[r.edge_index(h, t)].is_true());
  EXPECT_TRUE(r.edge_constraints[r.edge_index(t, b)].is_true());

  // Head carries no node constraint: wildcard contents are unconstrained.
  EXPECT_TRUE(r.node_constraints[h].is_true());
}

TEST(RewriteSeq1Plus, SelfLoopBecomesTailToHead) {
  Pattern p = pattern_of({{"nodes", {{{"id", "S"}, {"kind", "seq1plus"}}}},
                          {"edges", {{{"src", "S"}, {"dst", "S"}}}}});
  Pattern r = rewrite_seq1plus(p);
  int h = r.index_of("S#head"), t = r.index_of("S#tail");
  EXPECT_TRUE(r.has_edge(h, t));
  EXPECT_TRUE(r.has_edge(t, h));
  EXPECT_EQ(r.m(), 2);
}

TEST(RewriteSeq1Plus, AvoidsNameCollisions) {
  Pattern p = pattern_of({{"nodes",
                           {{{"id", "S"}, {"kind", "seq1plus"}},
                            {{"id", "S#head"}},
                            {{"id", "S#tail"}}}},
                          {"edges", json::array()}});
  Pattern r = rewrite_seq1plus(p);
  EXPECT_EQ(r.n(), 4);
  EXPECT_GE(r.index_of("S#head'"), 0);
  EXPECT_GE(r.index_of("S#tail'"), 0);
}

TEST(RewriteSeq1Plus, KeepsPairConstraints) {
  Pattern p = pattern_of(
      {{"nodes", {{{"id", "A"}}, {{"id", "B"}}, {{"id", "S"}, {"kind", "seq1plus"}}}},
       {"edges", {{{"src", "A"}, {"dst", "S"}}, {{"src", "S"}, {"dst", "B"}}}},
       {"pair_constraints",
        {{{"u", "A"},
          {"v", "B"},
          {"constraint",
           {{"op", "eq"},
            {"lhs", {{"node", "A"}, {"attr", "x"}}},
            {"rhs", {{"node", "B"}, {"attr", "x"}}}}}}}}});
  Pattern r = rewrite_seq1plus(p);
  ASSERT_EQ(r.pairs.size(), 1u);
  EXPECT_EQ(r.ids[r.pairs[0].u], "A");
  EXPECT_EQ(r.ids[r.pairs[0].v], "B");
}

TEST(Expand, RejectsSeq1Plus) {
  Pattern p = pattern_of({{"nodes", {{{"id", "S"}, {"kind", "seq1plus"}}}},
                          {"edges", json::array()}});
  Graph g = graph_of({"a"}, {});
  EXPECT_THROW(expand(p, g, 1), std::invalid_argument);
}

TEST(Expand, WildcardFreeIsIdentityShaped) {
  Pattern p = pattern_of({{"nodes", {{{"id", "X"}}, {{"id", "Y"}}}},
                          {"edges", {{{"src", "X"}, {"dst", "Y"}}}}});
  Graph g = graph_of({"a", "b", "c"}, {{"a", "b"}});
  ExpandedPattern ep = expand(p, g, 3);
  EXPECT_EQ(ep.n_exp(), 2);
  EXPECT_EQ(names(ep), (std::vector<std::string>{"X", "Y"}));
  ASSERT_EQ(ep.edges.size(), 1u);
  EXPECT_EQ(ep.edges[0].src, 0);
  EXPECT_EQ(ep.edges[0].dst, 1);
  EXPECT_TRUE(ep.edges[0].chain.empty());
  EXPECT_EQ(ep.edges[0].variant, 0);
}

// One S* between two concretes at k=3: one in-license, two mids, three
// out-licenses, one skip.
TEST(Expand, SeqStarLicenseCountFrozen) {
  Pattern p = pattern_of(
      {{"nodes", {{{"id", "A"}}, {{"id", "B"}}, {{"id", "W"}, {"kind", "seq0plus"}}}},
       {"edges", {{{"src", "A"}, {"dst", "W"}}, {{"src", "W"}, {"dst", "B"}}}}});
  Graph g = graph_of({"a", "b", "c"}, {});
  ExpandedPattern ep = expand(p, g, 3);

  EXPECT_EQ(ep.n_exp(), 5);
  EXPECT_EQ(names(ep), (std::vector<std::string>{"A", "B", "W#1", "W#2", "W#3"}));
  EXPECT_EQ(ep.edges.size(), 7u);
  EXPECT_EQ(count_variant(ep, 1), 2);

  int skips = 0;
  for (const auto& e : ep.edges)
    if (!e.chain.empty()) {
      ++skips;
      EXPECT_EQ(ep.nodes[e.src].name, "A");
      EXPECT_EQ(ep.nodes[e.dst].name, "B");
      EXPECT_EQ(e.chain, std::vector<int>{p.index_of("W")});
    }
  EXPECT_EQ(skips, 1);
}

TEST(Expand, SubPlusCopiesGraphSkeleton) {
  Pattern p = pattern_of(
      {{"nodes", {{{"id", "A"}}, {{"id", "G"}, {"kind", "sub1plus"}}}},
       {"edges", {{{"src", "A"}, {"dst", "G"}}}}});
  Graph g = graph_of({"u", "v"}, {{"u", "v"}});
  ExpandedPattern ep = expand(p, g, 2);

  EXPECT_EQ(names(ep), (std::vector<std::string>{"A", "G#u", "G#v"}));
  // skeleton mid u->v plus boundary licenses into both copies
  ASSERT_EQ(ep.edges.size(), 3u);
  EXPECT_EQ(count_variant(ep, 1), 1);
  for (const auto& e : ep.edges) EXPECT_TRUE(e.chain.empty());
}

TEST(Expand, ChainThroughTwoWildcards) {
  Pattern p = pattern_of(
      {{"nodes",
        {{{"id", "A"}},
         {{"id", "B"}},
         {{"id", "S"}, {"kind", "seq0plus"}},
         {{"id", "G"}, {"kind", "sub0plus"}}}},
       {"edges",
        {{{"src", "A"}, {"dst", "S"}},
         {{"src", "S"}, {"dst", "G"}},
         {{"src", "G"}, {"dst", "B"}}}}});
  Graph g = graph_of({"a", "b"}, {{"a", "b"}});
  ExpandedPattern ep = expand(p, g, 2);

  // A, B, S#1, S#2, G#a, G#b
  EXPECT_EQ(ep.n_exp(), 6);
  // licenses: A->S (1), A->G skip S (2), A->B skip S,G (1), S->G (4),
  // S->B skip G (2), G->B (2); mids: seq 1, sub 1
  EXPECT_EQ(ep.edges.size(), 14u);
  EXPECT_EQ(count_variant(ep, 1), 2);

  int long_skip = 0;
  for (const auto& e : ep.edges)
    if (e.chain.size() == 2) {
      ++long_skip;
      EXPECT_EQ(e.chain, (std::vector<int>{p.index_of("S"), p.index_of("G")}));
    }
  EXPECT_EQ(long_skip, 1);
}

TEST(Expand, ChainPhiConjoinsEveryHop) {
  Pattern p = pattern_of(
      {{"nodes", {{{"id", "A"}}, {{"id", "B"}}, {{"id", "S"}, {"kind", "seq0plus"}}}},
       {"edges",
        {{{"src", "A"}, {"dst", "S"}, {"constraint", {{"op", "has"}, {"attr", "x"}}}},
         {{"src", "S"}, {"dst", "B"}, {"constraint", {{"op", "has"}, {"attr", "y"}}}}}}});
  Graph g = graph_of({"a"}, {});
  ExpandedPattern ep = expand(p, g, 1);

  const ExpEdge* skip = nullptr;
  for (const auto& e : ep.edges)
    if (!e.chain.empty()) skip = &e;
  ASSERT_NE(skip, nullptr);
  AttrMap both{{"x", AttrValue{int64_t{0}}}, {"y", AttrValue{int64_t{0}}}};
  AttrMap only_x{{"x", AttrValue{int64_t{0}}}};
  EXPECT_TRUE(skip->phi.eval(both));
  EXPECT_FALSE(skip->phi.eval(only_x));
  EXPECT_FALSE(skip->phi.eval({}));
}

TEST(Expand, SeqEntryIsHeadExitIsEverySlot) {
  Pattern p = pattern_of({{"nodes", {{{"id", "W"}, {"kind", "seq0plus"}}}},
                          {"edges", json::array()}});
  Graph g = graph_of({"a", "b", "c"}, {});
  ExpandedPattern ep = expand(p, g, 3);
  int w = p.index_of("W");
  EXPECT_EQ(ep.entries(w), (std::vector<int>{0}));
  EXPECT_EQ(ep.exits(w), (std::vector<int>{0, 1, 2}));
}

TEST(Expand, SubSelfLoopKeepsMidAndBoundaryApart) {
  Pattern p = pattern_of({{"nodes", {{{"id", "G"}, {"kind", "sub0plus"}}}},
                          {"edges", {{{"src", "G"}, {"dst", "G"}}}}});
  Graph g = graph_of({"a", "b"}, {{"a", "b"}});
  ExpandedPattern ep = expand(p, g, 2);

  // 1 skeleton mid + 4 boundary self-licenses
  EXPECT_EQ(ep.edges.size(), 5u);
  int both = 0;
  for (size_t i = 0; i + 1 < ep.edges.size(); ++i) {
    const auto &x = ep.edges[i], &y = ep.edges[i + 1];
    if (x.src == y.src && x.dst == y.dst && x.variant != y.variant) ++both;
  }
  EXPECT_EQ(both, 1);  // only the (G#a, G#b) pair exists as both kinds
}

TEST(Expand, DeterministicAcrossRuns) {
  Pattern p = pattern_of(
      {{"nodes",
        {{{"id", "A"}}, {{"id", "S"}, {"kind", "seq0plus"}}, {{"id", "G"}, {"kind", "sub1plus"}}}},
       {"edges",
        {{{"src", "A"}, {"dst", "S"}},
         {{"src", "S"}, {"dst", "G"}},
         {{"src", "G"}, {"dst", "A"}}}}});
  Graph g = graph_of({"x", "y", "z"}, {{"x", "y"}, {"y", "z"}, {"z", "x"}});
  ExpandedPattern e1 = expand(p, g, 3);
  ExpandedPattern e2 = expand(p, g, 3);
  EXPECT_EQ(e1.to_json(g).dump(), e2.to_json(g).dump());
}

TEST(EffectiveConnections, OnePlusWildcardsBlockTraversal) {
  Pattern p = pattern_of(
      {{"nodes", {{{"id", "A"}}, {{"id", "B"}}, {{"id", "S"}, {"kind", "seq1plus"}}}},
       {"edges", {{{"src", "A"}, {"dst", "S"}}, {{"src", "S"}, {"dst", "B"}}}}});
  auto preds = effective_preds(p, p.index_of("B"));
  ASSERT_EQ(preds.size(), 1u);
  EXPECT_EQ(preds[0].node, p.index_of("S"));
  EXPECT_TRUE(preds[0].chain.empty());
}

TEST(EffectiveConnections, ChainsReportedInPathOrder) {
  Pattern p = pattern_of(
      {{"nodes",
        {{{"id", "A"}},
         {{"id", "B"}},
         {{"id", "X"}, {"kind", "seq0plus"}},
         {{"id", "Y"}, {"kind", "sub0plus"}}}},
       {"edges",
        {{{"src", "A"}, {"dst", "X"}},
         {{"src", "X"}, {"dst", "Y"}},
         {{"src", "Y"}, {"dst", "B"}}}}});
  auto preds = effective_preds(p, p.index_of("B"));
  bool saw_long = false;
  for (const auto& c : preds)
    if (c.node == p.index_of("A")) {
      saw_long = true;
      EXPECT_EQ(c.chain, (std::vector<int>{p.index_of("X"), p.index_of("Y")}));
    }
  EXPECT_TRUE(saw_long);

  auto succs = effective_succs(p, p.index_of("A"));
  for (const auto& c : succs) {
    if (c.node == p.index_of("B")) {
      EXPECT_EQ(c.chain, (std::vector<int>{p.index_of("X"), p.index_of("Y")}));
    }
  }
}

TEST(EffectiveConnections, SelfLoopYieldsSelfConnection) {
  Pattern p = pattern_of({{"nodes", {{{"id", "G"}, {"kind", "sub0plus"}}}},
                          {"edges", {{{"src", "G"}, {"dst", "G"}}}}});
  auto succs = effective_succs(p, 0);
  ASSERT_EQ(succs.size(), 1u);
  EXPECT_EQ(succs[0].node, 0);
  EXPECT_TRUE(succs[0].chain.empty());
}

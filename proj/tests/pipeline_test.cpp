#include "regap/pipeline.hpp"

#include <gtest/gtest.h>

#include "regap/oracle.hpp"
#include "support/random_instances.hpp"
#include "support/test_util.hpp"

using namespace regap;
using regap::test::graph_of;

namespace {

// A -> S+ -> B with the endpoints pinned by attribute, so the interior chain
// is invisible to every concrete constraint and free to contract.
Pattern pinned_seq() {
  return Pattern::from_json(
      {{"nodes",
        {{{"id", "A"}, {"constraint", {{"op", "eq"}, {"attr", "x"}, {"value", 1}}}},
         {{"id", "B"}, {"constraint", {{"op", "eq"}, {"attr", "x"}, {"value", 2}}}},
         {{"id", "S"}, {"kind", "seq1plus"}}}},
       {"edges", {{{"src", "A"}, {"dst", "S"}}, {{"src", "S"}, {"dst", "B"}}}}});
}

Graph pinned_path() {
  return Graph::from_json(
      {{"nodes",
        {{{"id", "a"}, {"attrs", {{"x", 1}}}},
         {{"id", "x"}},
         {{"id", "y"}},
         {{"id", "b"}, {"attrs", {{"x", 2}}}}}},
       {"edges",
        {{{"src", "a"}, {"dst", "x"}},
         {{"src", "x"}, {"dst", "y"}},
         {{"src", "y"}, {"dst", "b"}}}}});
}

// Three interior nodes: a 1+ sequence at depth k holds at most k+1 of them.
Graph pinned_path3() {
  return Graph::from_json(
      {{"nodes",
        {{{"id", "a"}, {"attrs", {{"x", 1}}}},
         {{"id", "x"}},
         {{"id", "y"}},
         {{"id", "z"}},
         {{"id", "b"}, {"attrs", {{"x", 2}}}}}},
       {"edges",
        {{{"src", "a"}, {"dst", "x"}},
         {{"src", "x"}, {"dst", "y"}},
         {{"src", "y"}, {"dst", "z"}},
         {{"src", "z"}, {"dst", "b"}}}}});
}

}  // namespace

TEST(Pipeline, MatchesAndDecodes) {
  MatchResult r = match(pinned_seq(), pinned_path());
  ASSERT_EQ(r.status, MatchStatus::Match);
  EXPECT_TRUE(valid_witness(pinned_seq(), r.graph, r.witness));
  EXPECT_GE(r.attempts, 1);
}

TEST(Pipeline, MergeContractsTheInvisibleChain) {
  MatchOptions on, off;
  off.merge = false;
  MatchResult rm = match(pinned_seq(), pinned_path(), on);
  MatchResult rd = match(pinned_seq(), pinned_path(), off);
  ASSERT_EQ(rm.status, MatchStatus::Match);
  ASSERT_EQ(rd.status, MatchStatus::Match);
  EXPECT_TRUE(rm.merge_report.applied);
  EXPECT_LT(rm.graph.n(), rd.graph.n());
  EXPECT_FALSE(rm.merge_report.merged_pairs.empty());
  // each witness is checked against the graph its run encoded
  EXPECT_TRUE(valid_witness(pinned_seq(), rm.graph, rm.witness));
  EXPECT_TRUE(valid_witness(pinned_seq(), rd.graph, rd.witness));
}

TEST(Pipeline, NoMatchIsDefinitiveAtFullDepth) {
  Pattern p = Pattern::from_json(
      {{"nodes", {{{"id", "A"}}, {{"id", "B"}}}},
       {"edges", {{{"src", "A"}, {"dst", "B"}}, {{"src", "B"}, {"dst", "A"}}}}});
  MatchResult r = match(p, graph_of({"a", "b"}, {{"a", "b"}}));
  EXPECT_EQ(r.status, MatchStatus::NoMatch);
  EXPECT_FALSE(r.k_incomplete);
}

TEST(Pipeline, IterateKStopsAtFirstSufficientDepth) {
  MatchOptions opt;
  opt.merge = false;  // keep all three interior nodes so depth 1 is too shallow
  opt.iterate_k = true;
  MatchResult r = match(pinned_seq(), pinned_path3(), opt);
  ASSERT_EQ(r.status, MatchStatus::Match);
  EXPECT_EQ(r.k_used, 2);
  EXPECT_EQ(r.attempts, 2);
}

TEST(Pipeline, CappedDepthUnsatIsNotAVerdict) {
  MatchOptions opt;
  opt.merge = false;
  opt.k = 1;
  MatchResult r = match(pinned_seq(), pinned_path3(), opt);
  EXPECT_EQ(r.status, MatchStatus::Unknown);
  EXPECT_TRUE(r.k_incomplete);
  EXPECT_NE(r.note.find("depth"), std::string::npos);
}

TEST(Pipeline, ZeroTimeoutReportsTimeout) {
  MatchOptions opt;
  opt.timeout_ms = 0;
  MatchResult r = match(pinned_seq(), pinned_path(), opt);
  EXPECT_EQ(r.status, MatchStatus::Unknown);
  EXPECT_EQ(r.note, "timeout");
  EXPECT_EQ(r.attempts, 0);
}

TEST(Pipeline, MergeOnOffAgreeOnRandomInstances) {
  std::mt19937 rng(777);
  int checked = 0;
  for (int i = 0; i < 60; ++i) {
    auto inst = regap::test::random_instance(rng);
    MatchOptions on, off;
    off.merge = false;
    MatchResult rm = match(inst.p, inst.g, on);
    MatchResult rd = match(inst.p, inst.g, off);
    ASSERT_NE(rm.status, MatchStatus::Unknown);
    ASSERT_NE(rd.status, MatchStatus::Unknown);
    EXPECT_EQ(rm.status, rd.status)
        << "instance " << i << "\npattern: " << inst.p.to_json().dump(2)
        << "\ngraph: " << inst.g.to_json().dump(2);
    ++checked;
  }
  EXPECT_EQ(checked, 60);
}

TEST(Pipeline, AgreesWithOracle) {
  std::mt19937 rng(31337);
  for (int i = 0; i < 60; ++i) {
    auto inst = regap::test::random_instance(rng);
    OracleResult ores = oracle_match(inst.p, inst.g);
    if (ores.status == OracleStatus::Unknown) continue;
    MatchResult r = match(inst.p, inst.g);
    ASSERT_NE(r.status, MatchStatus::Unknown);
    EXPECT_EQ(r.status == MatchStatus::Match, ores.status == OracleStatus::Yes)
        << "instance " << i << "\npattern: " << inst.p.to_json().dump(2)
        << "\ngraph: " << inst.g.to_json().dump(2);
  }
}

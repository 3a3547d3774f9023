#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult sh(const std::string& cmd) {
  FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!pipe) return {};
  RunResult r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

RunResult run(const std::string& args) { return sh(std::string(REGAP_CLI_PATH) + " " + args); }

std::string sample(const std::string& name) {
  return std::string(REGAP_SAMPLES_DIR) + "/" + name;
}

}  // namespace

TEST(Cli, MatchExitCodes) {
  RunResult yes = run("match " + sample("fan_pattern.json") + " " + sample("fan_graph.json"));
  EXPECT_EQ(yes.code, 0);
  EXPECT_EQ(yes.out.rfind("MATCH", 0), 0u);

  RunResult no = run("match " + sample("guarded_pattern.json") + " " +
                     sample("guarded_graph_nomatch.json"));
  EXPECT_EQ(no.code, 1);
  EXPECT_EQ(no.out.rfind("NO-MATCH", 0), 0u);
}

TEST(Cli, MatchJsonCarriesWitness) {
  RunResult r = run("match --json " + sample("guarded_pattern.json") + " " +
                    sample("guarded_graph_match.json"));
  ASSERT_EQ(r.code, 0);
  auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["status"], "MATCH");
  EXPECT_EQ(doc["witness"]["map"]["A"], "v1");
}

TEST(Cli, OracleSubcommand) {
  EXPECT_EQ(run("oracle " + sample("fan_pattern.json") + " " + sample("fan_graph.json")).code, 0);
  EXPECT_EQ(run("oracle --engine rules " + sample("guarded_pattern.json") + " " +
                sample("guarded_graph_match.json"))
                .code,
            0);
}

TEST(Cli, EncodeEmitsDimacsAndSidecars) {
  RunResult r = run("encode --merge off " + sample("fan_pattern.json") + " " +
                    sample("fan_graph.json") + " --map /tmp/cli_map.json --emit-expanded "
                    "/tmp/cli_exp.json");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("p cnf 296 ", 0), 0u);

  std::ifstream map_in("/tmp/cli_map.json");
  ASSERT_TRUE(map_in.good());
  auto map = nlohmann::json::parse(map_in);
  EXPECT_EQ(map["o"].size(), 18u);
  EXPECT_EQ(map["c"].size(), 32u);

  std::ifstream exp_in("/tmp/cli_exp.json");
  ASSERT_TRUE(exp_in.good());
  EXPECT_TRUE(nlohmann::json::parse(exp_in).contains("nodes"));
}

TEST(Cli, MergeEmitsGraphAndReport) {
  RunResult r = run("merge " + sample("pinned_seq_pattern.json") + " " +
                    sample("pinned_seq_graph.json") + " --report /tmp/cli_rep.json");
  ASSERT_EQ(r.code, 0);
  auto merged = nlohmann::json::parse(r.out);
  EXPECT_EQ(merged["nodes"].size(), 3u);
  std::ifstream rep_in("/tmp/cli_rep.json");
  ASSERT_TRUE(rep_in.good());
  auto rep = nlohmann::json::parse(rep_in);
  EXPECT_TRUE(rep["applied"].get<bool>());
  EXPECT_EQ(rep["nodes_before"], 4);
}

TEST(Cli, GenIsDeterministic) {
  RunResult a = run("gen --seed 9");
  RunResult b = run("gen --seed 9");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  auto doc = nlohmann::json::parse(a.out);
  EXPECT_GT(doc["nodes"].size(), 3u);
}

TEST(Cli, GenCountZeroEmitsEmptyCorpus) {
  RunResult r = run("gen --count 0 --seed 1");
  ASSERT_EQ(r.code, 0);
  auto doc = nlohmann::json::parse(r.out);
  EXPECT_TRUE(doc.is_array());
  EXPECT_TRUE(doc.empty());
}

TEST(Cli, GenCorpusDirectoryIsReproducible) {
  sh("rm -rf /tmp/cli_corpus_a /tmp/cli_corpus_b");
  ASSERT_EQ(run("gen --count 3 --seed 9 --dir /tmp/cli_corpus_a").code, 0);
  ASSERT_EQ(run("gen --count 3 --seed 9 --dir /tmp/cli_corpus_b").code, 0);
  EXPECT_EQ(sh("ls /tmp/cli_corpus_a").out, "g0000.json\ng0001.json\ng0002.json\n");
  EXPECT_EQ(sh("diff -r /tmp/cli_corpus_a /tmp/cli_corpus_b").code, 0);
}

TEST(Cli, BenchEmitsCsv) {
  RunResult r = run("bench --graphs 2 --max-wildcards 1 --seed 4");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("instance,graph_nodes", 0), 0u);
  int lines = 0;
  for (char c : r.out) lines += c == '\n';
  EXPECT_EQ(lines, 5);  // header + 2 graphs x 2 queries
}

TEST(Cli, BenchEmptyCorpusIsHeaderOnly) {
  RunResult r = run("bench --graphs 0");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("instance,graph_nodes", 0), 0u);
  EXPECT_EQ(r.out.find('\n'), r.out.size() - 1);
}

TEST(Cli, BenchSummaryAndJsonl) {
  RunResult s = run("bench --graphs 2 --max-wildcards 1 --seed 4 --summary");
  ASSERT_EQ(s.code, 0);
  EXPECT_EQ(s.out.rfind("metric,min,max,median,mean", 0), 0u);
  EXPECT_NE(s.out.find("wildcards,instances"), std::string::npos);

  RunResult j = run("bench --graphs 1 --max-wildcards 1 --seed 4 --jsonl");
  ASSERT_EQ(j.code, 0);
  std::size_t eol = j.out.find('\n');
  ASSERT_NE(eol, std::string::npos);
  auto row = nlohmann::json::parse(j.out.substr(0, eol));
  EXPECT_TRUE(row.contains("instance"));
  EXPECT_TRUE(row.contains("status"));

  EXPECT_EQ(run("bench --graphs 1 --summary --jsonl").code, 64);
}

TEST(Cli, ErrorExitCodes) {
  EXPECT_EQ(run("match /definitely/not/there.json " + sample("fan_graph.json")).code, 66);
  std::ofstream("/tmp/cli_broken.json") << "{\"nodes\": [";
  EXPECT_EQ(run("match /tmp/cli_broken.json " + sample("fan_graph.json")).code, 65);
  std::ofstream("/tmp/cli_badshape.json") << "{\"nodes\": 17}";
  EXPECT_EQ(run("match /tmp/cli_badshape.json " + sample("fan_graph.json")).code, 65);
  EXPECT_EQ(run("").code, 64);
  EXPECT_EQ(run("match --merge sideways a b").code, 64);
  EXPECT_EQ(run("match --solver carrier-pigeon " + sample("fan_pattern.json") + " " +
                sample("fan_graph.json"))
                .code,
            64);
}

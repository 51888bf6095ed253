#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>

#include "stablecut/cli.hpp"

using namespace stablecut;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
  json doc() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("stablecut_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    auto p = (dir_ / name).string();
    std::ofstream(p, std::ios::binary) << text;
    return p;
  }
  std::string generate(const std::string& name, std::vector<std::string> args) {
    args.insert(args.begin(), "generate");
    auto r = run(args);
    EXPECT_EQ(r.code, 0) << r.err;
    return write(name, r.out);
  }

  fs::path dir_;
};

const char* kTriangleMis =
    R"({"problem":"mis","vertices":["a","b","c"],"weights":["1","1","1"],"edges":[["a","b"],["b","c"],["a","c"]]})";

}  // namespace

TEST_F(Cli, FreundKarloffHasSixVertices) {
  auto r = run({"generate", "--problem", "edge_mc", "--family", "freund-karloff", "--k", "3"});
  ASSERT_EQ(r.code, 0);
  auto j = r.doc();
  EXPECT_EQ(j["vertices"].size(), 6u);
  EXPECT_EQ(j["vertices"][0], "s1");
  EXPECT_EQ(j["edges"].size(), 9u);
}

TEST_F(Cli, FourPointTsp) {
  auto inst = generate("t.json", {"--problem", "tsp", "--family", "four-point"});
  for (bool cc : {false, true}) {
    std::vector<std::string> args{"solve", "--problem", "tsp", inst};
    if (cc) args.push_back("--cycle-cover-only");
    auto r = run(args);
    ASSERT_EQ(r.code, 0) << r.err;
    auto c = r.doc();
    EXPECT_EQ(c["verdict"], "Optimal");
    EXPECT_EQ(c["objective"], "4/1");
    EXPECT_EQ(c["lp_value"], "4/1");
    EXPECT_FALSE(c.contains("timing_ms"));
  }
  auto m = run({"margin", inst});
  ASSERT_EQ(m.code, 0);
  EXPECT_EQ(m.doc()["gamma_star"], "19/10");
}

TEST_F(Cli, NotStableExitsTwo) {
  auto inst = write("sq.json", R"({"problem":"tsp","vertices":["a","b","c","d"],
    "metric":[["0","1","1","1"],["1","0","1","1"],["1","1","0","1"],["1","1","1","0"]]})");
  auto r = run({"solve", inst});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.doc()["verdict"], "NotStable");
  EXPECT_TRUE(r.doc()["solution"].is_null());
  EXPECT_EQ(run({"margin", inst}).doc()["gamma_star"], "1/1");
}

TEST_F(Cli, ScaledFreundKarloffIsNotStableBelowThreshold) {
  auto inst = generate("fk.json", {"--problem", "edge_mc", "--family", "scaled-freund-karloff", "--gamma", "1.1"});
  auto r = run({"solve", inst, "--stability"});
  EXPECT_EQ(r.code, 2);
  auto c = r.doc();
  EXPECT_EQ(c["lp_value"], "157/44");
  EXPECT_EQ(c["stability"]["gamma_star"], "11/10");
}

TEST_F(Cli, VerifyChecksFeasibilityAndObjective) {
  auto inst = generate("t.json", {"--problem", "tsp", "--family", "four-point"});
  auto cert = run({"solve", inst}).doc();
  auto good = write("c.json", dump(cert));
  auto v = run({"verify", good, inst});
  EXPECT_EQ(v.code, 0);
  EXPECT_TRUE(v.doc()["valid"]);

  auto wrong = cert;
  wrong["objective"] = "7/2";
  v = run({"verify", write("w.json", dump(wrong)), inst});
  EXPECT_EQ(v.code, 1);
  EXPECT_TRUE(v.doc()["feasible"]);
  EXPECT_FALSE(v.doc()["objective_matches"]);

  auto infeasible = cert;
  infeasible["solution"]["tour"] = {"v0", "v1", "v1", "v3"};
  v = run({"verify", write("i.json", dump(infeasible)), inst});
  EXPECT_EQ(v.code, 1);
  EXPECT_FALSE(v.doc()["feasible"]);

  auto other = generate("fk.json", {"--problem", "edge_mc", "--family", "freund-karloff"});
  EXPECT_EQ(run({"verify", good, other}).code, 1);
}

TEST_F(Cli, EveryProblemCertificateVerifies) {
  std::vector<std::vector<std::string>> gens{
      {"--problem", "edge_mc", "--family", "planted", "--seed", "3"},
      {"--problem", "node_mc", "--family", "planted", "--seed", "3", "--gamma", "3"},
      {"--problem", "mis", "--family", "planted", "--seed", "3", "--gamma", "3"},
      {"--problem", "vertex_cover", "--family", "random", "--seed", "3"},
      {"--problem", "kcenter", "--family", "two-pairs", "--k", "2"},
      {"--problem", "kmedian", "--family", "two-pairs"},
      {"--problem", "kmedian", "--family", "steiner-gap", "--n", "4"},
      {"--problem", "tsp", "--family", "planted", "--seed", "3"}};
  int optimal = 0;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    auto inst = generate("i" + std::to_string(i) + ".json", gens[i]);
    auto r = run({"solve", inst});
    ASSERT_NE(r.code, 1) << gens[i][1] << ": " << r.err;
    auto v = run({"verify", write("c" + std::to_string(i) + ".json", r.out), inst});
    EXPECT_EQ(v.code, 0) << gens[i][1];
    EXPECT_TRUE(v.doc()["valid"]);
    optimal += r.code == 0;
  }
  EXPECT_GE(optimal, 5);
}

TEST_F(Cli, VertexCoverIsComplementOfIndependentSet) {
  auto r = run({"solve", write("vc.json", R"({"problem":"vertex_cover","vertices":["a","b","c"],
    "weights":["3","2","3"],"edges":[["a","b"],["b","c"]]})")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.doc()["objective"], "2/1");
  EXPECT_EQ(r.doc()["solution"]["vertices"], json({"b"}));
}

TEST_F(Cli, SheraliAdamsLevels) {
  auto inst = write("tri.json", kTriangleMis);
  auto l2 = run({"solve", inst, "--level", "2"}).doc();
  EXPECT_EQ(l2["extras"]["sa"]["value"], "1/1");
  EXPECT_TRUE(l2["extras"]["sa"]["integral"]);
  auto l0 = run({"solve", inst, "--level", "0"}).doc();
  EXPECT_EQ(l0["extras"]["sa"]["value"], "3/2");
  EXPECT_FALSE(l0["extras"]["sa"]["integral"]);
}

TEST_F(Cli, WeaklyStableSolver) {
  auto inst = write("w.json", R"({"problem":"edge_mc","vertices":["s1","s2","s3","a"],
    "edges":[["s1","a","5"],["s2","a","1"],["s3","a","1"]],"terminals":["s1","s2","s3"]})");
  auto r = run({"solve", inst, "--delta", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto c = r.doc();
  EXPECT_EQ(c["objective"], "2/1");
  EXPECT_EQ(c["extras"]["mode"], "weak");
  EXPECT_LE(c["extras"]["iterations"].get<long>(), c["extras"]["iteration_budget"].get<long>());
  auto frac = write("f.json", R"({"problem":"edge_mc","vertices":["s1","s2","a"],
    "edges":[["s1","a","1/2"],["s2","a","1"]],"terminals":["s1","s2"]})");
  EXPECT_EQ(run({"solve", frac, "--delta", "1"}).code, 1);
}

TEST_F(Cli, TimingOnlyOnRequest) {
  auto inst = write("tri.json", kTriangleMis);
  EXPECT_TRUE(run({"solve", inst, "--timing"}).doc().contains("timing_ms"));
  EXPECT_FALSE(run({"solve", inst}).doc().contains("timing_ms"));
}

TEST_F(Cli, ClusteringMarginIsUnsupported) {
  auto inst = generate("kc.json", {"--problem", "kcenter", "--family", "two-pairs"});
  auto m = run({"margin", inst});
  EXPECT_EQ(m.code, 1);
  EXPECT_NE(m.err.find("clustering"), std::string::npos);
  auto s = run({"solve", inst, "--stability"});
  EXPECT_EQ(s.code, 0);
  EXPECT_TRUE(s.doc()["stability"].contains("unsupported"));
}

TEST_F(Cli, BudgetLimitsEnumeration) {
  auto inst = generate("t.json", {"--problem", "tsp", "--family", "random", "--n", "8"});
  auto r = run({"margin", inst, "--budget", "5"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("error"), std::string::npos);
  EXPECT_EQ(run({"margin", inst, "--budget", "100000"}).code, 0);
  setenv("STABLECUT_BUDGET", "5", 1);
  EXPECT_EQ(run({"margin", inst}).code, 1);
  unsetenv("STABLECUT_BUDGET");
}

TEST_F(Cli, UsageAndIoErrorsExitOne) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"solve"}).code, 1);
  EXPECT_EQ(run({"solve", (dir_ / "missing.json").string()}).code, 1);
  EXPECT_EQ(run({"generate", "--problem", "tsp", "--family", "nope"}).code, 1);
  EXPECT_EQ(run({"generate", "--problem", "tsp", "--family", "random", "--gamma", "x"}).code, 0);
  EXPECT_EQ(run({"generate", "--problem", "edge_mc", "--family", "scaled-freund-karloff", "--gamma", "x"}).code, 1);
  auto inst = write("t.json", kTriangleMis);
  EXPECT_EQ(run({"solve", "--problem", "tsp", inst}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(Cli, MalformedJsonGivesPosition) {
  auto bad = write("bad.json", "{\"problem\": \"mis\",\n \"vertices\": [\"a\" \"b\"]}");
  auto r = run({"solve", bad});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("bad.json:2:"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("malformed JSON"), std::string::npos);
}

TEST_F(Cli, GenerateIsDeterministicPerSeed) {
  for (const std::string p : {"edge_mc", "tsp", "mis"}) {
    auto a = run({"generate", "--problem", p, "--family", "random", "--seed", "7"}).out;
    auto b = run({"generate", "--problem", p, "--family", "random", "--seed", "7"}).out;
    auto c = run({"generate", "--problem", p, "--family", "random", "--seed", "8"}).out;
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
  }
}

TEST_F(Cli, OutputFlagWritesFile) {
  auto path = (dir_ / "o.json").string();
  auto r = run({"generate", "--problem", "tsp", "--family", "four-point", "-o", path});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(run({"solve", path}).doc()["objective"], "4/1");
}

TEST_F(Cli, SweepCsv) {
  auto r = run({"sweep"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "gamma,integral,lp_value,opt_value");
  std::vector<std::string> rows;
  while (std::getline(in, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 11u);
  EXPECT_EQ(rows.front(), "1/1,false,15/4,4/1");
  EXPECT_EQ(rows.back(), "2/1,true,2/1,2/1");
  EXPECT_EQ(run({"sweep", "--jobs", "1"}).out, r.out);
  EXPECT_EQ(run({"sweep", "--from", "1.0", "--to", "2.0", "--step", "0.1", "--jobs", "3"}).out, r.out);
  EXPECT_EQ(run({"sweep", "--step", "0"}).code, 1);
}

TEST(CliNumbers, DecimalsAreExact) {
  EXPECT_EQ(cli::parse_number("1.1", "x"), Rational(11, 10));
  EXPECT_EQ(cli::parse_number("-0.25", "x"), Rational(-1, 4));
  EXPECT_EQ(cli::parse_number("8/7", "x"), Rational(8, 7));
  EXPECT_EQ(cli::parse_number("3", "x"), Rational(3));
  EXPECT_THROW(cli::parse_number(".", "x"), cli::UsageError);
  EXPECT_THROW(cli::parse_number("1.x", "x"), cli::UsageError);
}

TEST(Samples, ReloadByteIdenticallyAndSolveAsDocumented) {
  const std::map<std::string, int> expected{
      {"edge_mc_planted.json", 0},          {"freund_karloff_k3.json", 2},  {"freund_karloff_k3_scaled_11_10.json", 2},
      {"kcenter_two_pairs.json", 0},        {"kmedian_steiner_gap_n4.json", 2}, {"mis_colorable_tight.json", 2},
      {"node_star_gap.json", 2},            {"tsp_four_point.json", 0}};
  for (const auto& [name, code] : expected) {
    const std::string path = std::string(STABLECUT_SAMPLES_DIR) + "/" + name;
    const std::string text = cli::read_text(path);
    EXPECT_EQ(dump(save_instance(load_instance(parse_json(text, path)))), text) << name;
    EXPECT_EQ(run({"solve", path}).code, code) << name;
  }
  const std::string dir = STABLECUT_SAMPLES_DIR;
  auto v = run({"verify", dir + "/tsp_four_point.certificate.json", dir + "/tsp_four_point.json"});
  EXPECT_EQ(v.code, 0);
}

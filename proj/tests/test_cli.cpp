// Copyright 2026 The mqo-anneal Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli_app.hpp"
#include "fixtures.hpp"

namespace mqo {
namespace {

namespace fs = std::filesystem;

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = cli::run_cli(std::move(args), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = testing::scratch_dir(::testing::UnitTest::GetInstance()->current_test_info()->name());
    io::write_json_file(path("two_queries.json"), io::to_json(testing::two_query_instance()));
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, GenerateReportsPlanCount) {
  const auto r = cli({"generate", "--queries", "20", "--plans", "2", "--density", "0.3", "--seed", "7",
                      "--out", path("i.json")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("40 plans"), std::string::npos) << r.out;
  EXPECT_EQ(io::instance_from_json(io::read_json_file(path("i.json"))).num_plans(), 40u);
}

TEST_F(CliTest, GenerateIsDeterministic) {
  for (const char* name : {"a.json", "b.json"})
    ASSERT_EQ(cli({"generate", "--queries", "20", "--plans", "2", "--density", "0.3", "--seed", "7", "--out",
                   path(name)}).code, 0);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
}

TEST_F(CliTest, GenerateRejectsBadFlags) {
  EXPECT_EQ(cli({"generate", "--density", "1.5", "--seed", "7", "--out", path("i.json")}).code, cli::kUsage);
  EXPECT_EQ(cli({"generate", "--queries", "3", "--out", path("i.json")}).code, cli::kUsage);
  EXPECT_EQ(cli({"generate", "--cost-min", "5", "--cost-max", "1", "--seed", "1", "--out", path("i.json")}).code,
            cli::kUsage);
  EXPECT_FALSE(fs::exists(path("i.json")));
}

TEST_F(CliTest, MapReportsWeightsAndTerms) {
  const auto r = cli({"map", "--in", path("two_queries.json"), "--out", path("l.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("w_L = 4.25"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("w_M = 9.5"), std::string::npos);
  EXPECT_NE(r.out.find("variables: 4"), std::string::npos);
  EXPECT_NE(r.out.find("quadratic terms: 3 (1 negative)"), std::string::npos);
  const auto file = io::logical_from_json(io::read_json_file(path("l.json")));
  EXPECT_DOUBLE_EQ(file.logical.qubo.linear(0), -2.25);
}

TEST_F(CliTest, MapWithoutSavingsHasNoNegativeTerms) {
  const MqoInstance plain({{"q1", {{"a", 1}, {"b", 2}}, ""}, {"q2", {{"c", 3}}, ""}}, {});
  io::write_json_file(path("plain.json"), io::to_json(plain));
  const auto r = cli({"map", "--in", path("plain.json"), "--out", path("l.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("(0 negative)"), std::string::npos) << r.out;
}

TEST_F(CliTest, MapMissingFileIsIoError) {
  const auto r = cli({"map", "--in", path("missing.json"), "--out", path("l.json")});
  EXPECT_EQ(r.code, cli::kUsage);
  EXPECT_NE(r.err.find("missing.json"), std::string::npos);
}

TEST_F(CliTest, InputAndOutputMustDiffer) {
  EXPECT_EQ(cli({"map", "--in", path("two_queries.json"), "--out", path("two_queries.json")}).code, cli::kUsage);
  EXPECT_EQ(io::instance_from_json(io::read_json_file(path("two_queries.json"))).num_plans(), 4u);
}

Qubo complete_qubo(std::size_t n) {
  Qubo q(n);
  for (VarId i = 0; i < n; ++i) {
    q.add_linear(i, -1.0);
    for (VarId k = i + 1; k < n; ++k) q.add_quadratic(i, k, 0.5);
  }
  return q;
}

TEST_F(CliTest, EmbedCompleteEightVariablesOnTriad) {
  io::write_json_file(path("k8.json"), io::to_json(complete_qubo(8)));
  const auto r = cli({"embed", "--in", path("k8.json"), "--out", path("p.json"), "--pattern", "triad",
                      "--grid", "4x4", "--embedding-out", path("e.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("qubits used: 24"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("dropped chains: 0"), std::string::npos);
  const auto j = io::read_json_file(path("p.json"));
  EXPECT_TRUE(j.contains("qubo"));
  EXPECT_EQ(io::physical_from_json(j).embedding.chains.size(), 8u);
  EXPECT_EQ(io::embedding_from_json(io::read_json_file(path("e.json"))).chains.size(), 8u);
}

TEST_F(CliTest, EmbedOversizedIsInfeasible) {
  io::write_json_file(path("k20.json"), io::to_json(complete_qubo(20)));
  const auto r = cli({"embed", "--in", path("k20.json"), "--out", path("p.json"), "--grid", "1x1"});
  EXPECT_EQ(r.code, cli::kInfeasible);
  EXPECT_NE(r.err.find("cluster 0"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(path("p.json")));
}

TEST_F(CliTest, EmbedWarnsAboutDroppedChains) {
  io::write_json_file(path("k8.json"), io::to_json(complete_qubo(8)));
  io::write_json_file(path("mask.json"), io::json::array({0}));
  const auto r = cli({"embed", "--in", path("k8.json"), "--out", path("p.json"), "--pattern", "triad",
                      "--grid", "4x4", "--broken", path("mask.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("dropped chains: 1"), std::string::npos) << r.out;
  EXPECT_NE(r.err.find("warning: 1 chain(s) dropped"), std::string::npos) << r.err;
  EXPECT_EQ(io::physical_from_json(io::read_json_file(path("p.json"))).embedding.chains.size(), 8u);
}

TEST_F(CliTest, EmbedClusteredNeedsSavingsInsideClusters) {
  ASSERT_EQ(cli({"map", "--in", path("two_queries.json"), "--out", path("l.json")}).code, 0);
  const auto forced = cli({"embed", "--in", path("l.json"), "--out", path("p.json"), "--pattern", "clustered"});
  EXPECT_EQ(forced.code, cli::kInfeasible);
  const auto automatic = cli({"embed", "--in", path("l.json"), "--out", path("p.json")});
  ASSERT_EQ(automatic.code, 0) << automatic.err;
  EXPECT_NE(automatic.out.find("pattern: triad"), std::string::npos) << automatic.out;
  EXPECT_TRUE(io::read_json_file(path("p.json")).contains("logical"));
}

TEST_F(CliTest, EmbedRejectsBadGridAndPattern) {
  io::write_json_file(path("k8.json"), io::to_json(complete_qubo(8)));
  EXPECT_EQ(cli({"embed", "--in", path("k8.json"), "--out", path("p.json"), "--grid", "4by4"}).code, cli::kUsage);
  EXPECT_EQ(cli({"embed", "--in", path("k8.json"), "--out", path("p.json"), "--pattern", "x"}).code, cli::kUsage);
}

TEST_F(CliTest, SolveExactOnTwoQueries) {
  const auto r = cli({"solve", "--in", path("two_queries.json"), "--algo", "exact", "--out", path("s.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("selection: p2 p3"), std::string::npos) << r.out;
  const auto s = io::read_json_file(path("s.json"));
  EXPECT_EQ(s.at("selection"), io::json({"p2", "p3"}));
  EXPECT_DOUBLE_EQ(s.at("cost").get<double>(), 2.0);
}

TEST_F(CliTest, SolveAnnealOnPhysicalFileMatchesOracle) {
  ASSERT_EQ(cli({"map", "--in", path("two_queries.json"), "--out", path("l.json")}).code, 0);
  ASSERT_EQ(cli({"embed", "--in", path("l.json"), "--out", path("p.json")}).code, 0);
  const auto r = cli({"solve", "--in", path("p.json"), "--algo", "sa", "--runs", "1000", "--seed", "1", "--out",
                      path("s.json"), "--record", path("r.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto s = io::read_json_file(path("s.json"));
  EXPECT_EQ(s.at("selection"), io::json({"p2", "p3"}));
  EXPECT_EQ(s.at("input"), "physical");
  EXPECT_TRUE(s.at("valid").get<bool>());
  EXPECT_TRUE(s.at("inconsistent_chains").empty());
  EXPECT_DOUBLE_EQ(s.at("energy").get<double>(), -6.5);
  EXPECT_EQ(io::read_json_file(path("r.json")).at("batches").size(), 10u);
}

TEST_F(CliTest, SolveIsDeterministicGivenSeed) {
  for (const char* name : {"a.json", "b.json"})
    ASSERT_EQ(cli({"solve", "--in", path("two_queries.json"), "--algo", "sa", "--runs", "200", "--seed", "5",
                   "--out", path(name)}).code, 0);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
}

TEST_F(CliTest, SolveGaUsesRosterName) {
  const auto r = cli({"solve", "--in", path("two_queries.json"), "--algo", "ga", "--population", "50", "--seed",
                      "3", "--deadline-ms", "10", "--out", path("s.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("GA(50)"), std::string::npos) << r.out;
  EXPECT_EQ(io::read_json_file(path("s.json")).at("algorithm"), "GA(50)");
}

TEST_F(CliTest, SolveClimbRecordsCheckpoints) {
  const auto r = cli({"solve", "--in", path("two_queries.json"), "--algo", "climb", "--seed", "3", "--deadline-ms",
                      "10", "--record", path("r.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rec = io::read_json_file(path("r.json"));
  EXPECT_EQ(rec.at("solver"), "CLIMB");
  ASSERT_EQ(rec.at("checkpoints").size(), 2u);
  EXPECT_DOUBLE_EQ(rec.at("checkpoints").back().at("best").get<double>(), 2.0);
}

TEST_F(CliTest, SolveRejectsUnknownAlgoAndMissingSeed) {
  EXPECT_EQ(cli({"solve", "--in", path("two_queries.json"), "--algo", "tabu", "--seed", "1"}).code, cli::kUsage);
  EXPECT_EQ(cli({"solve", "--in", path("two_queries.json"), "--algo", "sa"}).code, cli::kUsage);
  EXPECT_EQ(cli({"solve", "--in", path("two_queries.json"), "--algo", "sa", "--seed", "1", "--runs", "150"}).code,
            cli::kUsage);
}

TEST_F(CliTest, PipelineReproducesOracle) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto s = std::to_string(seed);
    ASSERT_EQ(cli({"generate", "--queries", "5", "--plans", "3", "--density", "0.4", "--seed", s, "--out",
                   path("i.json")}).code, 0);
    ASSERT_EQ(cli({"map", "--in", path("i.json"), "--out", path("l.json")}).code, 0);
    ASSERT_EQ(cli({"embed", "--in", path("l.json"), "--out", path("p.json")}).code, 0);
    ASSERT_EQ(cli({"solve", "--in", path("p.json"), "--algo", "exact", "--out", path("s.json")}).code, 0);
    const auto instance = io::instance_from_json(io::read_json_file(path("i.json")));
    const auto oracle = brute_force_mqo(instance);
    const auto sol = io::read_json_file(path("s.json"));
    EXPECT_EQ(sol.at("selection").get<std::vector<std::string>>(), selection_ids(instance, oracle.selection));
    EXPECT_NEAR(sol.at("cost").get<double>(), oracle.cost, kTolerance);
  }
}

TEST_F(CliTest, VerifyPassesAndNegativeControlFails) {
  const auto ok = cli({"verify", "--instances", "200", "--max-queries", "6", "--seed", "11"});
  EXPECT_EQ(ok.code, 0) << ok.out;
  EXPECT_NE(ok.out.find("optimum equivalence: 200/200"), std::string::npos) << ok.out;
  EXPECT_NE(ok.out.find("chain consistency: 100/100"), std::string::npos);
  const auto bad = cli({"verify", "--instances", "200", "--seed", "11", "--break-wm", "--chain-trials", "0"});
  EXPECT_EQ(bad.code, cli::kVerificationFailed);
  EXPECT_NE(bad.out.find("FAILED"), std::string::npos);
  EXPECT_EQ(cli({"verify", "--instances", "5"}).code, cli::kUsage);
}

TEST_F(CliTest, BenchWritesCsvPerSchema) {
  io::json suite = {{"master_seed", 3},
                    {"checkpoints_ms", {1, 10}},
                    {"families", {{{"queries", 4}, {"plans", 2}, {"count", 2}, {"seed", 1}}}},
                    {"solvers", {{{"type", "sa"}, {"batches", 2}, {"runs_per_batch", 10}},
                                 {{"type", "climb"}},
                                 {{"type", "exact"}}}}};
  io::write_json_file(path("suite.json"), suite);
  const auto r = cli({"bench", "--suite", path("suite.json"), "--out", path("out"), "--workers", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream csv(path("out/curves.csv"));
  const auto rows = read_curves_csv(csv);
  EXPECT_FALSE(rows.empty());
  EXPECT_EQ(slurp(path("out/curves.csv")).rfind(kCurveCsvHeader, 0), 0u);
  for (const char* f : {"summary.csv", "summary.txt", "metadata.json"}) EXPECT_TRUE(fs::exists(dir_ / "out" / f)) << f;
  EXPECT_EQ(io::read_json_file(path("out/metadata.json")).at("instances").size(), 2u);
}

TEST_F(CliTest, BenchRejectsMalformedSuite) {
  io::write_json_file(path("suite.json"), io::json{{"families", io::json::array()}});
  EXPECT_EQ(cli({"bench", "--suite", path("suite.json"), "--out", path("out")}).code, cli::kUsage);
}

TEST_F(CliTest, ShippedSamplesLoad) {
  const fs::path samples = MQO_SAMPLES_DIR;
  const auto instance = io::instance_from_json(io::read_json_file(samples / "two_queries.json"));
  EXPECT_EQ(io::to_json(instance), io::to_json(testing::two_query_instance()));
  const auto suite = suite_from_json(io::read_json_file(samples / "suite.json"));
  EXPECT_EQ(suite.families.size(), 2u);
  EXPECT_EQ(suite.solvers.size(), 4u);
  const auto r = cli({"solve", "--in", (samples / "two_queries.json").string(), "--algo", "exact"});
  EXPECT_NE(r.out.find("selection: p2 p3"), std::string::npos) << r.out;
}

TEST_F(CliTest, HelpAndMissingSubcommand) {
  EXPECT_EQ(cli({"--help"}).code, 0);
  EXPECT_EQ(cli({}).code, cli::kUsage);
  EXPECT_EQ(cli({"frobnicate"}).code, cli::kUsage);
}

}  // namespace
}  // namespace mqo

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

#include <cmath>
#include <sstream>

#include "mqo/bench.hpp"

namespace mqo {
namespace {

SolverSpec solver(SolverKind kind) {
  SolverSpec s;
  s.kind = kind;
  s.anneal.sweeps = 16;
  s.anneal.runs_per_batch = 10;
  s.anneal.batches = 5;
  s.ga.population = 20;
  s.name = default_solver_name(s);
  return s;
}

BenchSuite small_suite(std::size_t count = 5) {
  BenchSuite suite;
  FamilySpec f;
  f.name = "Q6P2";
  f.params.queries = 6;
  f.params.plans_per_query = 2;
  f.params.seed = 3;
  f.count = count;
  suite.families = {f};
  suite.solvers = {solver(SolverKind::sa_physical), solver(SolverKind::climb), solver(SolverKind::ga),
                   solver(SolverKind::exact)};
  suite.checkpoints_ms = {0.1, 1, 10};
  suite.master_seed = 99;
  return suite;
}

TimeCostCurve curve(std::string family, std::string solver, std::vector<std::pair<double, double>> pts,
                    double reference) {
  TimeCostCurve c{family + "-x", family, std::move(solver), 0, {}};
  for (auto [t, best] : pts) c.points.push_back({t, 1, best, best / reference, true});
  return c;
}

TEST(RunSuite, CardinalityAndShapes) {
  const auto suite = small_suite(20);
  const auto result = run_suite(suite);
  EXPECT_EQ(result.curves.size(), 80u);
  EXPECT_EQ(result.instances.size(), 20u);
  for (const auto& inst : result.instances) {
    EXPECT_FALSE(inst.skipped);
    EXPECT_EQ(inst.reference_policy, "oracle");
  }
  for (const auto& c : result.curves) {
    ASSERT_FALSE(c.points.empty());
    for (std::size_t i = 1; i < c.points.size(); ++i) EXPECT_LE(c.points[i].best_cost, c.points[i - 1].best_cost);
    for (const auto& p : c.points) EXPECT_GE(p.scaled_cost, 1.0 - 1e-9);
    if (c.solver == "SA") {
      ASSERT_EQ(c.points.size(), 5u);
      for (std::size_t b = 0; b < 5; ++b) EXPECT_EQ(c.points[b].runs, 10 * (b + 1));
    } else if (c.solver == "EXACT") {
      EXPECT_DOUBLE_EQ(c.points.back().scaled_cost, 1.0);
    } else {
      ASSERT_EQ(c.points.size(), 3u);
      EXPECT_EQ(c.points[0].time_ms, 0.1);
      EXPECT_EQ(c.points[2].time_ms, 10.0);
    }
  }
}

TEST(RunSuite, IndependentOfWorkerCount) {
  auto suite = small_suite(6);
  const auto one = run_suite(suite);
  suite.workers = 3;
  const auto three = run_suite(suite);
  std::ostringstream a;
  std::ostringstream b;
  write_curves_csv(a, curve_rows(one.curves));
  write_curves_csv(b, curve_rows(three.curves));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(metadata_json(one).dump(), metadata_json(three).dump());
}

TEST(RunSuite, InfeasibleEmbeddingSkipsInstance) {
  auto suite = small_suite(2);
  suite.families[0].params.queries = 20;
  suite.grid_rows = 1;
  suite.grid_cols = 1;
  const auto result = run_suite(suite);
  EXPECT_TRUE(result.curves.empty());
  for (const auto& inst : result.instances) {
    EXPECT_TRUE(inst.skipped);
    EXPECT_NE(inst.reason.find("embedding infeasible"), std::string::npos);
  }
  EXPECT_FALSE(result.warnings.empty());
}

TEST(RunSuite, BestFoundReferenceWhenOracleTooExpensive) {
  auto suite = small_suite(2);
  suite.oracle_budget = 10;
  const auto result = run_suite(suite);
  for (const auto& inst : result.instances) EXPECT_EQ(inst.reference_policy, "best-found");
  // The exact solver cannot run without the oracle; three solvers remain.
  EXPECT_EQ(result.curves.size(), 6u);
  for (const auto& inst : result.instances) {
    double best = 1e300;
    for (const auto& c : result.curves)
      if (c.instance_id == inst.id) best = std::min(best, c.points.back().best_cost);
    EXPECT_EQ(best, inst.reference_cost);
  }
}

TEST(RunSuite, ValidatesSuite) {
  auto suite = small_suite();
  suite.checkpoints_ms = {1, 1};
  EXPECT_THROW(run_suite(suite), std::invalid_argument);
  suite = small_suite();
  suite.solvers.clear();
  EXPECT_THROW(run_suite(suite), std::invalid_argument);
  suite = small_suite(0);
  EXPECT_THROW(run_suite(suite), std::invalid_argument);
}

TEST(Csv, RoundTrip) {
  const auto result = run_suite(small_suite(3));
  const auto rows = curve_rows(result.curves);
  std::ostringstream out;
  write_curves_csv(out, rows);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), kCurveCsvHeader);
  std::istringstream in(out.str());
  EXPECT_EQ(read_curves_csv(in), rows);

  std::vector<CurveRow> odd{{"a,\"b\"", "GA(50)", 1, 0.1 + 0.2, 3, -1.0 / 3.0,
                             std::numeric_limits<double>::quiet_NaN(), false}};
  std::ostringstream o2;
  write_curves_csv(o2, odd);
  std::istringstream i2(o2.str());
  EXPECT_EQ(read_curves_csv(i2), odd);

  std::istringstream bad("wrong,header\n");
  EXPECT_THROW(read_curves_csv(bad), FormatError);
}

TEST(Summary, SingleCurve) {
  BenchResult r;
  r.instances.push_back({"F-x", "F", 10.0, "oracle", false, "", "", 0});
  r.curves.push_back(curve("F", "S", {{1, 12}, {10, 11}, {100, 10}}, 10.0));
  const auto rows = summarize(r);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].time_to_best_min, 100.0);
  EXPECT_EQ(rows[0].time_to_best_median, 100.0);
  EXPECT_EQ(rows[0].time_to_best_max, 100.0);
  EXPECT_DOUBLE_EQ(rows[0].mean_final_scaled, 1.0);
  EXPECT_DOUBLE_EQ(rows[0].mean_improvement, 2.0 / 12.0);
  EXPECT_EQ(rows[0].reached_reference, 1u);
}

TEST(Summary, HandComputedAggregates) {
  BenchResult r;
  r.instances.push_back({"F-x", "F", 10.0, "oracle", false, "", "", 0});
  r.curves.push_back(curve("F", "S", {{1, 20}, {10, 10}, {100, 10}}, 10.0));   // ttb 10
  r.curves.push_back(curve("F", "S", {{1, 12}, {10, 12}, {100, 12}}, 10.0));   // ttb 1
  r.curves.push_back(curve("F", "S", {{1, 15}, {10, 14}, {100, 11}}, 10.0));   // ttb 100
  r.curves.push_back(curve("F", "S", {{1, 11}, {10, 11}, {100, 11}}, 10.0));   // ttb 1
  const auto rows = summarize(r);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].curves, 4u);
  EXPECT_EQ(rows[0].time_to_best_min, 1.0);
  EXPECT_EQ(rows[0].time_to_best_median, 1.0);  // lower median of {1, 1, 10, 100}
  EXPECT_EQ(rows[0].time_to_best_max, 100.0);
  EXPECT_DOUBLE_EQ(rows[0].mean_final_scaled, (1.0 + 1.2 + 1.1 + 1.1) / 4);
  EXPECT_DOUBLE_EQ(rows[0].mean_improvement, (0.5 + 0.0 + 4.0 / 15.0 + 0.0) / 4);
}

TEST(Summary, EmptyFamilyOmittedWithWarning) {
  BenchResult r;
  r.instances.push_back({"F-x", "F", 10.0, "oracle", false, "", "", 0});
  r.instances.push_back({"G-0", "G", 0.0, "", true, "embedding infeasible", "", 0});
  r.curves.push_back(curve("F", "S", {{1, 10}}, 10.0));
  std::vector<std::string> warnings;
  const auto rows = summarize(r, &warnings);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].family, "F");
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("G"), std::string::npos);
  EXPECT_THROW(summarize(BenchResult{}), std::invalid_argument);
}

TEST(Summary, OutputsAreDeterministic) {
  const auto result = run_suite(small_suite(3));
  std::ostringstream a;
  std::ostringstream b;
  write_summary_csv(a, summarize(result));
  write_summary_csv(b, summarize(result));
  EXPECT_EQ(a.str(), b.str());
  std::ostringstream table;
  write_summary_table(table, summarize(result));
  EXPECT_NE(table.str().find("CLIMB"), std::string::npos);
}

TEST(SuiteFile, ParsesAndRejects) {
  const auto j = io::json::parse(R"({
    "master_seed": 5, "checkpoints_ms": [1, 10], "workers": 2, "grid": [12, 12],
    "families": [{"name": "A", "queries": 4, "plans": 3, "count": 2, "seed": 9, "density": 0.2}],
    "solvers": [{"type": "sa", "sweeps": 32, "runs_per_batch": 10, "batches": 3},
                {"type": "ga", "population": 200}, {"type": "climb", "first_improvement": true}]
  })");
  const auto suite = suite_from_json(j);
  EXPECT_EQ(suite.master_seed, 5u);
  EXPECT_EQ(suite.families[0].params.plans_per_query, 3u);
  EXPECT_EQ(suite.families[0].count, 2u);
  EXPECT_EQ(suite.solvers[0].anneal.sweeps, 32u);
  EXPECT_EQ(suite.solvers[1].name, "GA(200)");
  EXPECT_EQ(suite.solvers[2].climb, ClimbStrategy::first_improvement);

  auto bad = j;
  bad["checkpoints_ms"] = {10, 1};
  EXPECT_THROW(suite_from_json(bad), FormatError);
  bad = j;
  bad["solvers"][0]["type"] = "quantum";
  EXPECT_THROW(suite_from_json(bad), FormatError);
  bad = j;
  bad.erase("master_seed");
  EXPECT_THROW(suite_from_json(bad), FormatError);
}

}  // namespace
}  // namespace mqo

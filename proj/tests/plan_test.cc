// Copyright 2026 The Livetest Planner Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ltp/plan.h"

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "ltp/pipeline.h"
#include "test_util.h"

namespace ltp {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;
using json = nlohmann::json;

std::vector<TestCase> Cases(int n) {
  std::vector<TestCase> cases(n);
  for (int i = 0; i < n; ++i) cases[i].id = "G#" + std::to_string(i + 1);
  return cases;
}

std::vector<int> Fragments(const std::vector<TestCase>& cases) {
  std::vector<int> out;
  for (const auto& c : cases) out.push_back(c.role.fragment);
  return out;
}

TEST(PatternTest, MostRestrictiveMethodWins) {
  EXPECT_EQ(PatternOf({}), TestMethod::kSingleStep);
  EXPECT_EQ(PatternOf({{"A", TestMethod::kSingleStep},
                       {"B", TestMethod::kBigFlip}}),
            TestMethod::kBigFlip);
  EXPECT_EQ(PatternOf({{"A", TestMethod::kSmallFlip},
                       {"B", TestMethod::kBigFlip}}),
            TestMethod::kSmallFlip);
  EXPECT_EQ(PatternOf({{"A", TestMethod::kSmallFlip},
                       {"B", TestMethod::kRollingPaths}}),
            TestMethod::kRollingPaths);
}

TEST(ApplyMethodPatternTest, SingleStepChunksByParallelCapacity) {
  auto cases = Cases(6);
  ApplyMethodPattern(cases, {{"A", TestMethod::kSingleStep}}, 3, 0);
  EXPECT_THAT(Fragments(cases), ElementsAre(0, 0, 0, 1, 1, 1));
  EXPECT_EQ(cases[0].role.pattern, TestMethod::kSingleStep);
  EXPECT_EQ(cases[0].role.batch, 0);
  EXPECT_THROW(ApplyMethodPattern(cases, {}, 0, 0), std::invalid_argument);
}

TEST(ApplyMethodPatternTest, RollingIsSequential) {
  auto cases = Cases(4);
  ApplyMethodPattern(cases,
                     {{"A", TestMethod::kRollingPaths},
                      {"B", TestMethod::kSingleStep}},
                     3, 0);
  EXPECT_THAT(Fragments(cases), ElementsAre(-1, -1, -1, -1));
  for (const auto& c : cases) {
    EXPECT_TRUE(c.role.procedures_before.empty());
    EXPECT_TRUE(c.role.procedures_after.empty());
  }
}

TEST(ApplyMethodPatternTest, SmallFlipSplitsBatchesAroundRelocation) {
  auto cases = Cases(5);
  ApplyMethodPattern(cases, {{"A", TestMethod::kSmallFlip}}, 2, 2);
  EXPECT_THAT(Fragments(cases), ElementsAre(0, 0, 1, 1, 2));
  std::vector<int> batches;
  for (const auto& c : cases) batches.push_back(c.role.batch);
  EXPECT_THAT(batches, ElementsAre(1, 1, 2, 2, 2));
  EXPECT_THAT(cases[1].role.procedures_after,
              ElementsAre(Procedure{kServiceRelocation, "A"}));
  for (int i : {0, 2, 3, 4}) {
    EXPECT_TRUE(cases[i].role.procedures_after.empty());
  }
}

TEST(ApplyMethodPatternTest, BigFlipWrapsWithCloneProcedures) {
  auto cases = Cases(3);
  ApplyMethodPattern(cases,
                     {{"A", TestMethod::kBigFlip},
                      {"B", TestMethod::kSingleStep}},
                     3, 0);
  EXPECT_THAT(Fragments(cases), ElementsAre(0, 0, 0));
  EXPECT_THAT(cases.front().role.procedures_before,
              ElementsAre(Procedure{kCloneSetup, "A"}));
  EXPECT_THAT(cases.back().role.procedures_after,
              ElementsAre(Procedure{kRelocateAndRemove, "A"}));
}

TEST(ChooseDeploymentTest, PrecedenceOverTime) {
  EXPECT_EQ(ChooseDeployment({"F", {{DeploymentOption::kContainer, 2},
                                    {DeploymentOption::kVm, 30}}})
                .option,
            DeploymentOption::kContainer);
  EXPECT_EQ(
      ChooseDeployment({"F", {{DeploymentOption::kConfigurationManager, 10}}})
          .option,
      DeploymentOption::kConfigurationManager);
  const FrameworkDeployment d = ChooseDeployment(
      {"F", {{DeploymentOption::kVm, 30},
             {DeploymentOption::kConfigurationManager, 5}}});
  EXPECT_EQ(d.option, DeploymentOption::kVm);
  EXPECT_DOUBLE_EQ(d.deployment_time, 30);
  EXPECT_THROW(ChooseDeployment({"F", {}}), PlanError);
}

class WorkedExamplePlanTest : public ::testing::Test {
 protected:
  void SetUp() override {
    model_ = testing::LoadFixture("paper_example");
    plan_ = RunPipeline(model_, {});
  }

  SystemModel model_;
  TestPlan plan_;
};

TEST_F(WorkedExamplePlanTest, DeployBodyAndInvocations) {
  const TestCase* found = nullptr;
  for (const auto& tc : plan_.schedule) {
    if (tc.setup == "deploy {CI3:{E3.1},CI2:{E2.1},CI5:{E1.2}}") found = &tc;
  }
  ASSERT_NE(found, nullptr);
  std::vector<AppId> apps;
  for (const auto& inv : found->main) apps.push_back(inv.application);
  EXPECT_THAT(apps, ElementsAre("TC5-1", "TC4-0", "TC2-0"));
  EXPECT_EQ(found->teardown, "remove {CI3:{E3.1},CI2:{E2.1},CI5:{E1.2}}");
  EXPECT_EQ(found->grouping, "TC2-0");
}

TEST_F(WorkedExamplePlanTest, WrapupPicksFrameworkOptions) {
  EXPECT_EQ(plan_.objective, model_.objective);
  const auto& d = plan_.metadata.framework_deployments;
  EXPECT_EQ(d.at("TC1").option, DeploymentOption::kContainer);
  EXPECT_EQ(d.at("TC3").option, DeploymentOption::kVm);
  EXPECT_EQ(d.size(), 5u);
}

TEST_F(WorkedExamplePlanTest, RoundTripIsExact) {
  const std::string text = PlanToText(plan_);
  const TestPlan parsed = ParsePlanText(text);
  EXPECT_EQ(parsed, plan_);
  EXPECT_EQ(PlanToText(parsed), text);
}

TEST_F(WorkedExamplePlanTest, DocumentLayout) {
  const json doc = SerializePlan(plan_);
  EXPECT_TRUE(doc.contains("objective"));
  ASSERT_TRUE(doc["schedule"].is_array());
  const json& entry = doc["schedule"][0];
  EXPECT_EQ(entry["setup"]["role"], "setup");
  EXPECT_EQ(entry["teardown"]["role"], "teardown");
  EXPECT_EQ(entry["main"][0]["role"], "main");
  EXPECT_TRUE(entry["structural_role"].contains("pattern"));
  EXPECT_TRUE(doc["metadata"].contains("cost_total"));
}

TEST_F(WorkedExamplePlanTest, CostTotalsSumGroupingCosts) {
  CostBreakdown sum{0, 0, 0, 0};
  for (const auto& g : plan_.metadata.groupings) {
    const int configs = static_cast<int>(std::count_if(
        plan_.schedule.begin(), plan_.schedule.end(),
        [&](const TestCase& tc) { return tc.grouping == g.head; }));
    for (const auto& [ci, m] : g.methods) {
      const CostBreakdown expected =
          DeploymentCost(m, configs, g.parallel_capacity,
                         model_.Ci(ci).component_count, g.first_batch);
      EXPECT_EQ(g.cost.at(ci), expected) << g.head << " " << ci;
      sum.instantiations += expected.instantiations;
      sum.removals += expected.removals;
      sum.relocations += expected.relocations;
      sum.iteration_count += expected.iteration_count;
    }
  }
  EXPECT_EQ(plan_.metadata.cost_total, sum);
}

TEST_F(WorkedExamplePlanTest, ParseErrorsNamePointer) {
  json doc = SerializePlan(plan_);
  doc["schedule"][1].erase("teardown");
  try {
    ParsePlan(doc);
    FAIL() << "expected PlanParseError";
  } catch (const PlanParseError& e) {
    EXPECT_STREQ(e.what(), "/schedule/1: missing teardown");
  }
  doc = SerializePlan(plan_);
  doc["schedule"][0]["structural_role"]["pattern"] = "SIDEWAYS";
  EXPECT_THROW(
      {
        try {
          ParsePlan(doc);
        } catch (const PlanParseError& e) {
          EXPECT_THAT(e.what(), HasSubstr("/schedule/0/structural_role/pattern"));
          throw;
        }
      },
      PlanParseError);
  doc = SerializePlan(plan_);
  doc["metadata"]["cost_total"]["removals"] = "many";
  EXPECT_THROW(ParsePlan(doc), PlanParseError);
  doc = SerializePlan(plan_);
  doc["schedule"][0]["main"] = json::array();
  EXPECT_THROW(ParsePlan(doc), PlanParseError);
  EXPECT_THROW(ParsePlanText("{\"objective\": "), PlanParseError);
}

TEST_F(WorkedExamplePlanTest, MetricsReplayRelocations) {
  const PlanMetrics metrics = ComputeMetrics(plan_);
  EXPECT_EQ(metrics.test_cases, static_cast<int>(plan_.schedule.size()));
  int total = 0;
  for (const auto& [ci, m] : metrics.cis) total += m.relocations;
  EXPECT_EQ(metrics.total_relocations, total);
  const json j = MetricsToJson(metrics);
  EXPECT_EQ(j["total_relocations"], total);
  EXPECT_GT(j["estimated_wall_time"].get<double>(), 0);
  EXPECT_THAT(MetricsToText(metrics), HasSubstr("relocations"));
}

TEST(MetricsTest, RollingCountsEveryConfiguration) {
  const SystemModel model = testing::GrayInstance({2, 2});
  const TestPlan plan = RunPipeline(model, {});
  ASSERT_EQ(plan.schedule.size(), 4u);
  const PlanMetrics metrics = ComputeMetrics(plan);
  // The Gray order changes CI1 once and CI2 twice; each grouping start
  // counts one deployment per rolling CI.
  EXPECT_EQ(metrics.cis.at("CI1").relocations, 2);
  EXPECT_EQ(metrics.cis.at("CI2").relocations, 3);
  EXPECT_EQ(metrics.cis.at("CI1").cost.relocations, 4);
  EXPECT_EQ(metrics.fragments, 4);
}

TEST(MetricsTest, SingleStepPlanHasNoRelocation) {
  const SystemModel model = testing::ModelBuilder()
                                .Ci("A", 2, {1, 1})
                                .Ci("B", 2, {1, 1, 1})
                                .Edge("A", "B", 5)
                                .Tsi("T", {{"A", "B"}},
                                     {CoverageKind::kAllBeMixturesPaths, 1}, 4)
                                .Build();
  const TestPlan plan = RunPipeline(model, {});
  ASSERT_EQ(plan.schedule.size(), 6u);
  const PlanMetrics metrics = ComputeMetrics(plan);
  EXPECT_EQ(metrics.total_relocations, 0);
  EXPECT_EQ(metrics.fragments, 3);
  EXPECT_DOUBLE_EQ(metrics.wall_time, 3 * 4.0);
  for (const auto& tc : plan.schedule) {
    EXPECT_EQ(tc.role.pattern, TestMethod::kSingleStep);
  }
}

TEST(MetricsTest, UnknownGroupingIsRejected) {
  TestPlan plan;
  plan.schedule.push_back({});
  plan.schedule[0].id = "X#1";
  plan.schedule[0].grouping = "X";
  EXPECT_THROW(ComputeMetrics(plan), PlanParseError);
}

}  // namespace
}  // namespace ltp

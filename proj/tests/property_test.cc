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

// Randomized end-to-end properties of generated plans.

#include <random>
#include <set>

#include "gtest/gtest.h"
#include "ltp/oracle.h"
#include "ltp/pipeline.h"
#include "test_util.h"

namespace ltp {
namespace {

constexpr int kTrials = 150;

ClaimStatus StatusOf(const VerificationReport& report,
                     const std::string& claim) {
  const ClaimResult* c = report.Find(claim);
  return c == nullptr ? ClaimStatus::kSkipped : c->status;
}

TEST(PlanPropertyTest, RandomPlansPassEveryOracle) {
  std::mt19937 rng(101);
  testing::RandomOptions opts;
  opts.max_precedence = 6;
  for (int i = 0; i < kTrials; ++i) {
    const SystemModel model = testing::RandomInstance(rng, opts);
    TestPlan plan;
    try {
      plan = RunPipeline(model, {});
    } catch (const PrecedenceError&) {
      EXPECT_FALSE(PrecedenceSatisfiable(testing::InitialDraft(model),
                                         testing::TsiOf(model),
                                         model.precedence))
          << "trial " << i;
      continue;
    }
    EXPECT_TRUE(PrecedenceSatisfiable(testing::InitialDraft(model),
                                      testing::TsiOf(model), model.precedence))
        << "trial " << i;
    const VerificationReport report = VerifyPlan(model, plan);
    ASSERT_TRUE(report.Passed()) << "trial " << i << "\n" << report.ToText();
    EXPECT_EQ(StatusOf(report, "completeness"), ClaimStatus::kPass);
  }
}

TEST(PlanPropertyTest, MinimalityCheckedWithoutPrecedence) {
  std::mt19937 rng(202);
  testing::RandomOptions opts;
  int checked = 0;
  for (int i = 0; i < kTrials; ++i) {
    const SystemModel model = testing::RandomInstance(rng, opts);
    const VerificationReport report = VerifyPlan(model, RunPipeline(model, {}));
    ASSERT_NE(StatusOf(report, "minimality"), ClaimStatus::kFail)
        << "trial " << i << "\n" << report.ToText();
    checked += StatusOf(report, "minimality") == ClaimStatus::kPass;
  }
  EXPECT_GT(checked, kTrials / 2);
}

TEST(PlanPropertyTest, DeterministicAndRoundTrips) {
  std::mt19937 rng(303);
  for (int i = 0; i < 40; ++i) {
    const SystemModel model = testing::RandomInstance(rng, {});
    const TestPlan plan = RunPipeline(model, {});
    const std::string text = PlanToText(plan);
    EXPECT_EQ(text, PlanToText(RunPipeline(model, {})));
    const TestPlan parsed = ParsePlanText(text);
    EXPECT_EQ(parsed, plan);
    EXPECT_EQ(PlanToText(parsed), text);
  }
}

TEST(PlanPropertyTest, FragmentsRespectParallelCapacity) {
  std::mt19937 rng(404);
  for (int i = 0; i < 60; ++i) {
    const SystemModel model = testing::RandomInstance(rng, {});
    const TestPlan plan = RunPipeline(model, {});
    for (const auto& g : plan.metadata.groupings) {
      std::map<int, int> per_fragment;
      for (const auto& tc : plan.schedule) {
        if (tc.grouping == g.head && tc.role.fragment >= 0) {
          ++per_fragment[tc.role.fragment];
        }
      }
      for (const auto& [fragment, count] : per_fragment) {
        EXPECT_LE(count, g.parallel_capacity) << g.head << " " << fragment;
      }
    }
  }
}

TEST(PlanPropertyTest, SimulationMatchesMetrics) {
  std::mt19937 rng(505);
  for (int i = 0; i < 60; ++i) {
    const SystemModel model = testing::RandomInstance(rng, {});
    const TestPlan plan = RunPipeline(model, {});
    const DisturbanceReport sim = SimulateExecution(plan, model);
    EXPECT_TRUE(sim.violations.empty()) << "trial " << i;
    EXPECT_EQ(sim.TotalRelocations(), ComputeMetrics(plan).total_relocations);
  }
}

TEST(PlanPropertyTest, SmallFlipBatchesAreContiguous) {
  std::mt19937 rng(606);
  for (int i = 0; i < 80; ++i) {
    const SystemModel model = testing::RandomInstance(rng, {});
    const TestPlan plan = RunPipeline(model, {});
    for (const auto& g : plan.metadata.groupings) {
      int last = 0;
      for (const auto& tc : plan.schedule) {
        if (tc.grouping != g.head ||
            tc.role.pattern != TestMethod::kSmallFlip) {
          continue;
        }
        EXPECT_GE(tc.role.batch, last);
        last = tc.role.batch;
      }
    }
  }
}

}  // namespace
}  // namespace ltp

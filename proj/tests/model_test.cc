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

#include "ltp/model.h"

#include <random>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace ltp {
namespace {

using ::testing::ElementsAre;
using ::testing::Optional;

CallPath P(std::vector<CiId> v) { return {std::move(v)}; }

TEST(CallPathTest, SubPathOfWorkedExamplePaths) {
  EXPECT_TRUE(IsSubPath(P({"CI2", "CI5"}), P({"CI3", "CI2", "CI5"})));
  EXPECT_TRUE(IsSubPath(P({"CI5"}), P({"CI5"})));
  EXPECT_FALSE(IsSubPath(P({"CI8", "CI7"}), P({"CI4", "CI5", "CI9"})));
}

TEST(CallPathTest, SubPathNeedsEdgesNotJustVertices) {
  EXPECT_FALSE(IsSubPath(P({"A", "C"}), P({"A", "B", "C"})));
  EXPECT_FALSE(IsSubPath(P({"B", "A"}), P({"A", "B"})));
}

TEST(CallPathTest, MaxPath) {
  std::vector<CallPath> paths = {P({"CI2", "CI5"}), P({"CI5"}),
                                 P({"CI3", "CI2", "CI5"})};
  EXPECT_THAT(MaxPath(paths), Optional(P({"CI3", "CI2", "CI5"})));
  std::vector<CallPath> single = {P({"CI1"})};
  EXPECT_THAT(MaxPath(single), Optional(P({"CI1"})));
  std::vector<CallPath> disjoint = {P({"CI8", "CI7"}), P({"CI4", "CI5", "CI9"})};
  EXPECT_EQ(MaxPath(disjoint), std::nullopt);
  EXPECT_THROW(MaxPath(std::span<const CallPath>()), std::invalid_argument);
}

TEST(CallPathTest, EdgesAndToString) {
  CallPath p = P({"CI3", "CI2", "CI5"});
  EXPECT_THAT(p.edges(), ElementsAre(std::pair<CiId, CiId>("CI3", "CI2"),
                                     std::pair<CiId, CiId>("CI2", "CI5")));
  EXPECT_EQ(p.ToString(), "CI3->CI2->CI5");
  EXPECT_TRUE(P({"CI1"}).edges().empty());
}

TEST(CallPathTest, Validity) {
  CallGraph g;
  g.AddEdge("A", "B", 1);
  g.AddEdge("B", "C", 1);
  EXPECT_TRUE(IsValidPath(P({"A", "B", "C"}), g));
  EXPECT_TRUE(IsValidPath(P({"C"}), g));
  EXPECT_FALSE(IsValidPath(P({"A", "C"}), g));
  EXPECT_FALSE(IsValidPath(P({"A", "B", "A"}), g));
  EXPECT_FALSE(IsValidPath(P({"Z"}), g));
  EXPECT_FALSE(IsValidPath(P({}), g));
}

TEST(CallPathTest, SubPathIsReflexiveAndTransitiveOnChains) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<int> len(1, 6);
    const int n = len(rng);
    std::vector<CiId> v;
    for (int i = 0; i < n; ++i) v.push_back("V" + std::to_string(i));
    std::uniform_int_distribution<int> pick(0, n - 1);
    int a0 = pick(rng), a1 = pick(rng);
    if (a0 > a1) std::swap(a0, a1);
    int b0 = std::uniform_int_distribution<int>(0, a0)(rng);
    int b1 = std::uniform_int_distribution<int>(a1, n - 1)(rng);
    CallPath a = P({v.begin() + a0, v.begin() + a1 + 1});
    CallPath b = P({v.begin() + b0, v.begin() + b1 + 1});
    CallPath c = P(v);
    EXPECT_TRUE(IsSubPath(a, a));
    EXPECT_TRUE(IsSubPath(a, b));
    EXPECT_TRUE(IsSubPath(b, c));
    EXPECT_TRUE(IsSubPath(a, c));
  }
}

TEST(MixtureTest, WidthAndText) {
  Mixture m({{"E1.2", 2}, {"E5.2", 1}, {"E9", 0}});
  EXPECT_EQ(m.width(), 3);
  EXPECT_EQ(m.count("E1.2"), 2);
  EXPECT_EQ(m.count("E9"), 0);
  EXPECT_EQ(m.occurrences().size(), 2u);
  EXPECT_EQ(m.ToString(), "{E1.2,E1.2,E5.2}");
  EXPECT_EQ(Mixture({{"E3.1", 1}}).ToString(), "{E3.1}");
}

TEST(CallGraphTest, DependentsAndTolerance) {
  CallGraph g;
  g.AddEdge("CI2", "CI5", 10);
  g.AddEdge("CI4", "CI5", 8);
  g.AddEdge("CI3", "CI2", 2);
  EXPECT_THAT(g.Dependents("CI5"), ElementsAre("CI2", "CI4"));
  EXPECT_THAT(g.MinDependentTolerance("CI5"), Optional(8.0));
  EXPECT_EQ(g.MinDependentTolerance("CI3"), std::nullopt);
  EXPECT_THAT(g.TransitiveDependents("CI5"),
              ElementsAre("CI2", "CI3", "CI4"));
  EXPECT_THAT(g.Tolerance("CI3", "CI2"), Optional(2.0));
  EXPECT_FALSE(g.HasEdge("CI2", "CI3"));
}

TEST(CoverageKindTest, RoundTrip) {
  for (CoverageKind k :
       {CoverageKind::kAllBeMixtures, CoverageKind::kPairwiseBeMixtures,
        CoverageKind::kAllBeMixturesPaths}) {
    EXPECT_THAT(ParseCoverageKind(ToString(k)), Optional(k));
  }
  EXPECT_EQ(ToString(CoverageKind::kAllBeMixtures), "ALL_BE_MIXTURES");
  EXPECT_EQ(ParseCoverageKind("ALL"), std::nullopt);
}

TEST(SystemModelTest, WorkedExampleLookups) {
  const SystemModel model = testing::LoadFixture("paper_example");
  EXPECT_EQ(model.cis.size(), 9u);
  ASSERT_NE(model.FindCi("CI5"), nullptr);
  EXPECT_EQ(model.FindCi("CI99"), nullptr);
  std::vector<EnvId> envs;
  for (const auto* e : model.EnvironmentsOf("CI5")) envs.push_back(e->id);
  EXPECT_THAT(envs, ElementsAre("E1.2", "E5.2"));
  EXPECT_NE(model.FindEnvironment("CI1", "E1.2"), nullptr);
  EXPECT_EQ(model.FindEnvironment("CI2", "E1.2"), nullptr);
  std::vector<AppId> apps;
  for (const auto& a : model.Applications()) apps.push_back(a.id);
  EXPECT_THAT(apps, ElementsAre("TC1-0", "TC1-1", "TC2-0", "TC3-0", "TC4-0",
                                "TC5-0", "TC5-1"));
  EXPECT_TRUE(model.Isolation("CI5").risk);
  EXPECT_FALSE(model.Isolation("CI3").risk);
  EXPECT_DOUBLE_EQ(model.AcceptableOutage("SI6"), 5);
  EXPECT_DOUBLE_EQ(model.AcceptableOutage("SI5.1"), 0);
}

TEST(SystemModelTest, DerivedCriticalityCountsDependentServiceInstances) {
  const SystemModel model = testing::LoadFixture("paper_example");
  // CI9 <- CI5 <- {CI2 <- CI3, CI4, CI6 <- CI1}.
  EXPECT_EQ(model.Criticality("CI9"), 4 + 2 + 2 + 1 + 1 + 1);
  EXPECT_EQ(model.Criticality("CI3"), 0);
  EXPECT_EQ(model.Criticality("CI7"), 1);
}

TEST(SystemModelTest, ApplicationIds) {
  EXPECT_EQ(ApplicationId("TC1", 0), "TC1-0");
  EXPECT_EQ(ApplicationId("TC5", 1), "TC5-1");
}

}  // namespace
}  // namespace ltp

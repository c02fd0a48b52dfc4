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

// The test plan: an execution schedule of test cases with setup, main and
// teardown behaviour, method patterns, and explanatory metadata.

#ifndef LTP_PLAN_H_
#define LTP_PLAN_H_

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "ltp/coverage.h"
#include "ltp/method_select.h"
#include "ltp/model.h"
#include "ltp/ordering.h"

namespace ltp {

class PlanParseError : public PlanError {
 public:
  using PlanError::PlanError;
};

inline constexpr const char* kCloneSetup = "clone_setup";
inline constexpr const char* kRelocateAndRemove = "relocate_and_remove";
inline constexpr const char* kServiceRelocation = "service_relocation";

struct Procedure {
  std::string kind;
  CiId ci;

  friend bool operator==(const Procedure&, const Procedure&) = default;
};

struct StructuralRole {
  TestMethod pattern = TestMethod::kRollingPaths;
  int fragment = -1;  // parallel fragment index, -1 for sequential cases
  int batch = 0;      // small-flip batch 1 or 2, 0 otherwise
  std::vector<Procedure> procedures_before;
  std::vector<Procedure> procedures_after;

  friend bool operator==(const StructuralRole&,
                         const StructuralRole&) = default;
};

struct Invocation {
  TsiId tsi;
  AppId application;

  friend bool operator==(const Invocation&, const Invocation&) = default;
};

struct TestCase {
  std::string id;  // "<head>#<k>"
  AppId grouping;
  TestConfiguration configuration;
  std::string setup;  // "deploy {...}"
  std::vector<Invocation> main;
  std::string teardown;  // "remove {...}"
  StructuralRole role;

  friend bool operator==(const TestCase&, const TestCase&) = default;
};

struct GroupingInfo {
  AppId head;
  std::vector<AppId> members;
  CallPath max_path;
  CoverageCriterion coverage;
  int parallel_capacity = 1;
  int first_batch = 0;
  Seconds setup_time = 0;  // estimated per deployed configuration
  std::map<CiId, TestMethod> methods;
  std::map<CiId, CostBreakdown> cost;

  friend bool operator==(const GroupingInfo&, const GroupingInfo&) = default;
};

struct FrameworkDeployment {
  FrameworkId framework;
  DeploymentOption option = DeploymentOption::kContainer;
  Seconds deployment_time = 0;

  friend bool operator==(const FrameworkDeployment&,
                         const FrameworkDeployment&) = default;
};

struct ApplicationInfo {
  TsiId tsi;
  CallPath path;
  Seconds execution_time = 0;

  friend bool operator==(const ApplicationInfo&,
                         const ApplicationInfo&) = default;
};

struct PlanMetadata {
  std::vector<GroupingInfo> groupings;
  std::map<TsiId, FrameworkDeployment> framework_deployments;
  std::map<AppId, ApplicationInfo> applications;
  CostBreakdown cost_total;  // sums over groupings and CIs
  std::vector<std::string> notes;

  friend bool operator==(const PlanMetadata&, const PlanMetadata&) = default;
  const GroupingInfo* FindGrouping(const AppId& head) const;
};

struct TestPlan {
  std::string objective;
  std::vector<TestCase> schedule;
  PlanMetadata metadata;

  friend bool operator==(const TestPlan&, const TestPlan&) = default;
};

// Per-grouping decisions the plan builder needs besides the ordered cases.
struct GroupingDecisions {
  MethodAssignment methods;
  int parallel_capacity = 1;
  int first_batch = 0;
  Seconds setup_time = 0;
  std::map<CiId, int> cuts;  // clone set size of each flip CI
};

// One test case per ordered case, shaped by the grouping's method pattern.
TestPlan BuildPlan(const OrderedPlanDraft& draft,
                   const std::map<AppId, GroupingDecisions>& decisions,
                   const std::map<AppId, TsiApplication>& applications);

// Most restrictive method of an assignment: rolling, small flip, big flip,
// single step.
TestMethod PatternOf(const MethodAssignment& methods);

// Positions the method pattern onto a grouping's cases (in place).
// Throws std::invalid_argument when parallel_capacity < 1.
void ApplyMethodPattern(std::vector<TestCase>& cases,
                        const MethodAssignment& methods,
                        int parallel_capacity, int first_batch);

// First available option in the order container, VM, configuration manager.
// Throws PlanError when the framework lists none.
FrameworkDeployment ChooseDeployment(const Framework& framework);

// Attaches the objective and the framework deployment of every TSI.
void Wrapup(TestPlan& plan, const SystemModel& model);

nlohmann::json SerializePlan(const TestPlan& plan);
// Canonical text: sorted keys, two-space indent, trailing newline.
std::string PlanToText(const TestPlan& plan);
// Throws PlanParseError with the JSON pointer of the offending field.
TestPlan ParsePlan(const nlohmann::json& doc);
TestPlan ParsePlanText(const std::string& text);

nlohmann::json ConfigurationToJson(const TestConfiguration& config);

struct CiMetrics {
  int relocations = 0;  // replayed from the schedule
  CostBreakdown cost;   // summed over groupings
};

struct PlanMetrics {
  std::map<CiId, CiMetrics> cis;
  int test_cases = 0;
  int fragments = 0;  // parallel fragments plus sequential cases
  int total_relocations = 0;
  Seconds wall_time = 0;
};

// Computed from the plan document alone. A rolling CI relocates when its
// grouping starts and whenever its mixture changes; a flip CI once per
// grouping; a single-step CI never.
PlanMetrics ComputeMetrics(const TestPlan& plan);
nlohmann::json MetricsToJson(const PlanMetrics& metrics);
std::string MetricsToText(const PlanMetrics& metrics);

}  // namespace ltp

#endif  // LTP_PLAN_H_

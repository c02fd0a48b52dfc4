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

// Call-path merging: groups TSI applications whose runs can share deployed
// test configurations, then places every mandated run under a deployment.

#ifndef LTP_MERGING_H_
#define LTP_MERGING_H_

#include <map>
#include <set>
#include <vector>

#include "ltp/coverage.h"
#include "ltp/model.h"

namespace ltp {

struct Grouping {
  AppId head;
  std::set<AppId> members;  // contains head
  CallPath max_path;
  CoverageCriterion coverage;  // the head's criterion
};

// Strength order ALL_BE_MIXTURES < PAIRWISE < ALL_BE_MIXTURES_PATHS.
bool CoverageWeakerOrEqual(const CoverageCriterion& a,
                           const CoverageCriterion& b);
bool WidthLessOrEqual(const CoverageCriterion& a, const CoverageCriterion& b);

// Applications are processed in lexicographic id order whatever the input
// order. Output is sorted by head id.
std::vector<Grouping> MergeCallPaths(std::vector<TsiApplication> apps);

struct Run {
  AppId app;
  TestConfiguration configuration;  // on the application's path

  friend bool operator==(const Run&, const Run&) = default;
};

// One deployed configuration of a grouping and the runs it serves.
struct Deployment {
  TestConfiguration configuration;  // on the grouping's max path
  std::vector<Run> runs;            // sorted by application id
};

struct GroupRuns {
  Grouping grouping;
  std::vector<Deployment> deployments;  // in head configuration order
};

using AppConfigurations = std::map<AppId, std::vector<TestConfiguration>>;

AppConfigurations GenerateAllConfigurations(
    const std::vector<TsiApplication>& apps, const SystemModel& model);

// Every mandated (application, configuration) pair lands in exactly one
// deployment. Deployments whose configuration is contained in another one are
// folded into it, so the deployed configurations are exactly the maximal
// mandated ones. Empty deployments and groupings are dropped.
std::vector<GroupRuns> RequiredRuns(const std::vector<Grouping>& groupings,
                                    const std::vector<TsiApplication>& apps,
                                    const AppConfigurations& configurations);

size_t DeploymentCount(const std::vector<GroupRuns>& runs);

}  // namespace ltp

#endif  // LTP_MERGING_H_

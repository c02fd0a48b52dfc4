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

// Mixture enumeration and test configuration generation for the three
// environment coverage criteria.

#ifndef LTP_COVERAGE_H_
#define LTP_COVERAGE_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ltp/model.h"

namespace ltp {

// One mixture per CI of `path`, aligned by position.
struct TestConfiguration {
  CallPath path;
  std::vector<Mixture> mixtures;

  const Mixture* Find(const CiId& ci) const;
  // The configuration seen by a TSI running on `sub`; nullopt when a vertex
  // of `sub` is not on this configuration's path.
  std::optional<TestConfiguration> Restrict(const CallPath& sub) const;
  // "{CI3:{E3.1},CI2:{E2.1},CI5:{E1.2}}"
  std::string Body() const;

  friend bool operator==(const TestConfiguration&,
                         const TestConfiguration&) = default;
  friend auto operator<=>(const TestConfiguration&,
                          const TestConfiguration&) = default;
};

// All occurrence assignments of `width` over `environments`, in lexicographic
// order of the sorted environment-id multiset. Mixtures placing more
// occurrences on an environment than it has hosting nodes are skipped.
// Throws std::invalid_argument when width < 1.
std::vector<Mixture> EnumerateMixtures(
    std::span<const BoundaryEnvironment* const> environments, int width);

std::vector<Mixture> MixturesOf(const SystemModel& model, const CiId& ci,
                                int width);

// Rows of level indices, one entry per factor, satisfying `kind` over
// factors with the given level counts. Every count must be >= 1.
std::vector<std::vector<int>> CoveringRows(const std::vector<int>& level_counts,
                                           CoverageKind kind);

// Throws PlanError when a CI of the path has no deployable mixture.
std::vector<TestConfiguration> GenerateConfigurations(
    const CallPath& path, const CoverageCriterion& criterion,
    const SystemModel& model);

int ConfigurationCount(const CallPath& path, const CoverageCriterion& criterion,
                       const SystemModel& model);

}  // namespace ltp

#endif  // LTP_COVERAGE_H_

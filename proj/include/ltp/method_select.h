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

// Live-test method applicability, per-grouping selection and cost model.

#ifndef LTP_METHOD_SELECT_H_
#define LTP_METHOD_SELECT_H_

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ltp/merging.h"
#include "ltp/model.h"

namespace ltp {

// Declaration order is the tie-break order of exhaustive searches.
enum class TestMethod { kSingleStep, kRollingPaths, kSmallFlip, kBigFlip };

std::string ToString(TestMethod method);
std::optional<TestMethod> ParseTestMethod(const std::string& text);
bool IsFlip(TestMethod method);

inline constexpr TestMethod kAllMethods[] = {
    TestMethod::kSingleStep, TestMethod::kRollingPaths,
    TestMethod::kSmallFlip, TestMethod::kBigFlip};

class NoSafeMethodError : public PlanError {
 public:
  explicit NoSafeMethodError(CiId ci)
      : PlanError("no safe method for CI '" + ci + "'"), ci_(std::move(ci)) {}
  const CiId& ci() const { return ci_; }

 private:
  CiId ci_;
};

// Node arithmetic of the small-flip condition.
struct SmallFlipParams {
  int node_count = 0;  // |Nodes| of the CI
  int k = 0;           // components currently serving
  Seconds timing = 0;
  Seconds cool_down_period = 60;
  int scaling_step = 1;
};

// |Nodes| - K - floor(timing / coolDown) * scalingStep; may be negative.
long SmallFlipCapacity(const SmallFlipParams& params);
// Sum over the chosen environments of min(width, |hosting nodes|).
long SmallFlipDemand(std::span<const int> hosting_counts, int width);
// True iff some non-empty environment subset fits the capacity.
bool SmallFlipFeasible(std::span<const int> hosting_counts, int width,
                       const SmallFlipParams& params);
// Indices of the largest fitting subset (ties: smaller demand, then
// lexicographically smallest); empty when infeasible.
std::vector<size_t> SmallFlipBatch(std::span<const int> hosting_counts,
                                   int width, const SmallFlipParams& params);

// Estimated time a grouping keeps its configurations deployed: per deployment
// the snapshot and clone time of every risky CI on the path, plus the
// execution time of every run.
Seconds GroupingTiming(const SystemModel& model, const GroupRuns& group,
                       const std::map<AppId, Seconds>& execution_times);

SmallFlipParams SmallFlipParamsFor(const SystemModel& model, const CiId& ci,
                                   Seconds timing);
bool SmallFlipFeasibleFor(const SystemModel& model, const CiId& ci, int width,
                          Seconds timing);
// Environment ids of the first small-flip batch.
std::set<EnvId> SmallFlipBatchEnvironments(const SystemModel& model,
                                           const CiId& ci, int width,
                                           Seconds timing);

struct Applicability {
  std::set<TestMethod> methods;
  bool big_flip_preferred = false;
};

// Throws NoSafeMethodError when nothing applies.
Applicability ApplicableMethods(const SystemModel& model, const CiId& ci,
                                int width, Seconds timing);

// Inputs of one grouping's selection, shared with the exhaustive oracle.
struct CiChoice {
  CiId id;
  std::set<TestMethod> applicable;
  int mixture_count = 1;
  int clone_need = 1;     // nodes a clone set of the CI occupies
  bool can_host = true;   // the CI's own pool fits production plus clone
};

struct MethodSelectionProblem {
  std::vector<CiChoice> cis;  // in path order
  int free_nodes = 0;         // union of path pools minus production
  CoverageKind kind = CoverageKind::kAllBeMixtures;
};

using MethodAssignment = std::map<CiId, TestMethod>;

MethodSelectionProblem BuildSelectionProblem(const SystemModel& model,
                                             const GroupRuns& group,
                                             Seconds timing);

// Forced CIs first, then descending mixture count with precedence single
// step, big flip, small flip, rolling paths. `notes` receives fallbacks.
MethodAssignment SelectMethods(const MethodSelectionProblem& problem,
                               std::vector<std::string>* notes = nullptr);

// Resource check shared with the oracle: forced flips are always admitted,
// other flips must be hostable and fit in what remains.
bool AssignmentFitsResources(const MethodSelectionProblem& problem,
                             const MethodAssignment& assignment);

struct CostBreakdown {
  int instantiations = 0;
  int removals = 0;
  int relocations = 0;
  int iteration_count = 1;

  friend bool operator==(const CostBreakdown&, const CostBreakdown&) = default;
};

// min over path CIs of floor(component_count / width), at least 1.
int ParallelCapacity(const SystemModel& model, const CallPath& path,
                     int width);

// `cuts` is the clone set size; `first_batch` only matters for small flip.
CostBreakdown DeploymentCost(TestMethod method, int configurations,
                             int parallel_capacity, int cuts,
                             int first_batch = 0);

}  // namespace ltp

#endif  // LTP_METHOD_SELECT_H_

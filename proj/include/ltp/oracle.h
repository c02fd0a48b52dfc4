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

// Brute-force verifiers: sub-configuration order and source counting,
// exhaustive method selection, exhaustive ordering, disturbance replay, and
// whole-plan verification.

#ifndef LTP_ORACLE_H_
#define LTP_ORACLE_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ltp/coverage.h"
#include "ltp/method_select.h"
#include "ltp/model.h"
#include "ltp/plan.h"

namespace ltp {

class OracleCapError : public PlanError {
 public:
  using PlanError::PlanError;
};

enum class SubconfigOrder { kLess, kGreater, kEqual, kIncomparable };

std::string ToString(SubconfigOrder order);

// kLess when every CI of `a` appears in `b` with the same mixture and a != b.
SubconfigOrder SubconfigCompare(const TestConfiguration& a,
                                const TestConfiguration& b);

// Nodes are distinct configurations; an edge u -> v means v is a strict
// sub-configuration of u, so sources are the maximal configurations.
struct OrderGraph {
  std::vector<TestConfiguration> nodes;
  std::vector<std::pair<size_t, size_t>> edges;

  std::vector<size_t> Sources() const;
};

OrderGraph BuildOrderGraph(const std::vector<TestConfiguration>& configs);

// Throws OracleCapError when more than `cap` configurations are given.
int MinimalConfigCount(const std::vector<TestConfiguration>& configs,
                       size_t cap = 200);

// True when no two configurations are comparable.
bool PairwiseIncomparable(const std::vector<TestConfiguration>& configs);

// Instantiations plus removals of the CIs tested with rolling paths.
long RollingObjective(const MethodSelectionProblem& problem,
                      const MethodAssignment& assignment);
// Adds one instantiation and one removal per clone CUT of each flip CI.
long TotalObjective(const MethodSelectionProblem& problem,
                    const MethodAssignment& assignment);

struct MethodSelectionOptimum {
  MethodAssignment assignment;
  long objective = 0;
};

// Exhaustive over method tuples drawn from each CI's applicable set (plus
// the rolling fallback) under the engine's resource constraint. Ties go to
// the lexicographically smallest tuple in method enum order. Throws
// OracleCapError when the path has more than `cap` CIs.
MethodSelectionOptimum BruteForceMethodSelection(
    const MethodSelectionProblem& problem, bool total_objective = false,
    size_t cap = 5);

// Smallest K of the mixture-count definition, computed in closed form.
// With repetition the tuples may reuse a CI; nullopt when no K exists.
std::optional<int> ComputeK(const std::vector<int>& counts,
                            bool with_repetition);
// Enumerates every l-tuple for l in [1, max_l]; nullopt when l = max_l
// already fails.
std::optional<int> ComputeKBruteForce(const std::vector<int>& counts,
                                      bool with_repetition, int max_l);

struct BoundDiagnostic {
  std::string row;              // "R > B >= K", "R < B and B >= K", "none"
  std::optional<double> bound;  // OPT^(K^2) or OPT^K
  bool holds = true;            // G <= bound when a bound exists
};

BoundDiagnostic UpperBoundDiagnostic(int rolling, int big, int k, double g,
                                     double opt);

struct OrderingOptimum {
  int score = 0;
  std::vector<size_t> order;
};

// Sum of rolling-CI mixture changes between consecutive configurations.
int OrderingScore(const std::vector<TestConfiguration>& sequence,
                  const std::set<CiId>& rolling);

// Exhaustive over permutations; ties go to the lexicographically smallest
// order. Throws OracleCapError for more than `cap` configurations.
OrderingOptimum BruteForceBestOrdering(
    const std::vector<TestConfiguration>& configs,
    const std::set<CiId>& rolling, size_t cap = 8);

// Whether some placement of every run into a deployed configuration it is
// compatible with admits a violation-free case order, each grouping's cases
// staying contiguous. Throws OracleCapError past `cap` search steps.
bool PrecedenceSatisfiable(const OrderedPlanDraft& draft,
                           const std::map<AppId, TsiId>& tsi_of,
                           const std::vector<PrecedencePair>& pairs,
                           size_t cap = 1 << 16);

struct DisturbanceReport {
  std::map<CiId, int> relocations;
  std::map<SiId, Seconds> outage;
  std::vector<std::string> violations;

  int TotalRelocations() const;
};

DisturbanceReport SimulateExecution(const TestPlan& plan,
                                    const SystemModel& model);

enum class ClaimStatus { kPass, kFail, kSkipped };

std::string ToString(ClaimStatus status);

struct ClaimResult {
  std::string claim;
  ClaimStatus status = ClaimStatus::kPass;
  std::vector<std::string> details;
};

struct VerificationReport {
  std::vector<ClaimResult> claims;

  bool Passed() const;  // no claim failed
  const ClaimResult* Find(const std::string& claim) const;
  std::string ToText() const;
};

struct OracleCaps {
  size_t runs = 200;
  size_t cases = 8;
};

VerificationReport VerifyPlan(const SystemModel& model, const TestPlan& plan,
                              const OracleCaps& caps = {});

}  // namespace ltp

#endif  // LTP_ORACLE_H_

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

// Test run ordering: TSI precedence first, then configuration similarity
// (mixed-radix Gray code for full products).

#ifndef LTP_ORDERING_H_
#define LTP_ORDERING_H_

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ltp/coverage.h"
#include "ltp/merging.h"
#include "ltp/model.h"

namespace ltp {

struct CaseDraft {
  TestConfiguration configuration;  // on the grouping's max path
  std::vector<Run> invocations;     // in invocation order
};

struct GroupSchedule {
  Grouping grouping;
  std::vector<CaseDraft> cases;
};

struct OrderedPlanDraft {
  std::vector<GroupSchedule> groups;
  std::vector<PrecedencePair> maintained;  // pairs handled so far
  std::vector<std::string> notes;
};

class PrecedenceError : public PlanError {
 public:
  explicit PrecedenceError(PrecedencePair pair)
      : PlanError("unsatisfiable precedence " + pair.leading + " -> " +
                  pair.following),
        pair_(std::move(pair)) {}
  const PrecedencePair& pair() const { return pair_; }

 private:
  PrecedencePair pair_;
};

// One case per deployment, invocations in run order.
OrderedPlanDraft BuildDraft(const std::vector<GroupRuns>& runs);

// Number of CIs with different mixtures. Throws std::invalid_argument when
// the paths differ.
int Similarity(const TestConfiguration& a, const TestConfiguration& b);
// Same, counting only CIs in `counted`.
int Similarity(const TestConfiguration& a, const TestConfiguration& b,
               const std::set<CiId>& counted);

struct PrecedenceContext {
  std::map<AppId, TsiId> tsi_of;
  // Called for a grouping that received moved invocations.
  std::function<void(const GroupSchedule&)> on_receive;
};

// Orders invocations inside each case, moves following invocations into
// compatible cases when no arrangement exists otherwise, then sequences
// groupings and cases so that every case invoking a leading TSI precedes
// every case invoking its follower without it. Throws PrecedenceError.
OrderedPlanDraft EnforcePrecedence(OrderedPlanDraft draft,
                                   const std::vector<PrecedencePair>& pairs,
                                   const PrecedenceContext& context);

// First violated pair of a schedule, if any: a following TSI invoked before
// its leading TSI in a case, or a case invoking the follower without the
// leader placed before a case invoking the leader.
std::optional<PrecedencePair> FindPrecedenceViolation(
    const std::vector<std::vector<TsiId>>& cases,
    const std::vector<PrecedencePair>& pairs);

// Mixed-radix reflected Gray sequence, digit 0 most significant.
std::vector<std::vector<int>> GrayCode(const std::vector<int>& radices);

struct ConfigurationOrderContext {
  // Per grouping head: CIs whose mixture changes cost a relocation.
  std::map<AppId, std::set<CiId>> rolling;
  std::map<CiId, int> criticality;
  // Per grouping head: canonical mixture list of each path CI.
  std::map<AppId, std::vector<std::vector<Mixture>>> levels;
  std::optional<unsigned> seed;
};

// Within each run of consecutive cases invoking the same TSI set: Gray order
// for a full product under all-paths coverage, otherwise greedy nearest
// neighbour by relocation distance, ties to the least critical change.
OrderedPlanDraft OrderByConfiguration(OrderedPlanDraft draft,
                                      const ConfigurationOrderContext& context,
                                      const std::map<AppId, TsiId>& tsi_of);

// Digit significance for Gray ordering: rolling CIs by descending
// criticality, then the others; ties keep path order.
std::vector<size_t> DigitOrder(const CallPath& path,
                               const std::set<CiId>& rolling,
                               const std::map<CiId, int>& criticality);

}  // namespace ltp

#endif  // LTP_ORDERING_H_

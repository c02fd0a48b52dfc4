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

// Acceptance driver: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ltp/method_select.h"
#include "ltp/oracle.h"
#include "ltp/ordering.h"
#include "ltp/pipeline.h"
#include "test_util.h"

namespace ltp {
namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Check {
 public:
  void Expect(bool ok, const std::string& what) {
    if (!ok && failures_++ < 5) out_ << (out_.tellp() > 0 ? "; " : "") << what;
  }
  Outcome Done(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    return {false, std::to_string(failures_) + " failures: " + out_.str()};
  }

 private:
  int failures_ = 0;
  std::ostringstream out_;
};

double Elapsed(std::chrono::steady_clock::duration d) {
  return std::chrono::duration<double>(d).count();
}

Outcome WorkedExample() {
  Check check;
  const auto start = std::chrono::steady_clock::now();
  const SystemModel model = testing::LoadFixture("paper_example");
  const TestPlan plan = RunPipeline(model, {});
  const double elapsed = Elapsed(std::chrono::steady_clock::now() - start);
  bool grouping = false;
  for (const auto& g : plan.metadata.groupings) {
    if (g.max_path.vertices == std::vector<CiId>{"CI3", "CI2", "CI5"}) {
      grouping = std::set<AppId>(g.members.begin(), g.members.end()) ==
                 std::set<AppId>{"TC2-0", "TC4-0", "TC5-1"};
    }
  }
  check.Expect(grouping, "no grouping CI3->CI2->CI5 with {TC2-0,TC4-0,TC5-1}");
  const bool deploy =
      std::any_of(plan.schedule.begin(), plan.schedule.end(), [](auto& tc) {
        return tc.setup == "deploy {CI3:{E3.1},CI2:{E2.1},CI5:{E1.2}}";
      });
  check.Expect(deploy, "missing deploy {CI3:{E3.1},CI2:{E2.1},CI5:{E1.2}}");
  check.Expect(elapsed < 1.0, "runtime " + std::to_string(elapsed) + " s");
  return check.Done("grouping and deploy body match");
}

// Criteria 2 and 3 share their instances.
std::pair<Outcome, Outcome> MergingAndCompleteness() {
  Check minimal;
  Check complete;
  std::mt19937 rng(2026);
  testing::RandomOptions opts;
  opts.max_apps = 6;
  opts.max_path = 5;
  opts.max_envs = 3;
  const OracleCaps caps{1u << 20, 8};
  constexpr int kInstances = 500;
  for (int i = 0; i < kInstances; ++i) {
    const SystemModel model = testing::RandomInstance(rng, opts);
    const TestPlan plan = RunPipeline(model, {});
    const VerificationReport report = VerifyPlan(model, plan, caps);
    const ClaimResult* m = report.Find("minimality");
    const ClaimResult* c = report.Find("completeness");
    minimal.Expect(m && m->status == ClaimStatus::kPass,
                   "instance " + std::to_string(i) + ": " +
                       (m && !m->details.empty() ? m->details[0] : "skipped"));
    complete.Expect(c && c->status == ClaimStatus::kPass,
                    "instance " + std::to_string(i) + ": " +
                        (c && !c->details.empty() ? c->details[0] : "?"));
  }
  const std::string n = std::to_string(kInstances) + " instances";
  return {minimal.Done(n), complete.Done(n)};
}

Outcome GrayOrdering() {
  Check check;
  int instances = 0;
  int oracle_checked = 0;
  std::vector<std::vector<int>> shapes;
  for (int a = 1; a <= 4; ++a) {
    shapes.push_back({a});
    for (int b = 1; b <= 3; ++b) {
      shapes.push_back({a, b});
      for (int c = 1; c <= 2; ++c) shapes.push_back({a, b, c});
    }
  }
  for (const auto& counts : shapes) {
    std::vector<int> ranks(counts.size());
    std::iota(ranks.begin(), ranks.end(), 1);
    do {
      ++instances;
      const std::string name = [&] {
        std::string s = "counts";
        for (int x : counts) s += " " + std::to_string(x);
        s += " ranks";
        for (int x : ranks) s += " " + std::to_string(x);
        return s;
      }();
      const SystemModel model = testing::GrayInstance(counts, ranks);
      const TestPlan plan = RunPipeline(model, {});
      std::set<CiId> rolling;
      for (const auto& [ci, m] : plan.metadata.groupings.at(0).methods) {
        check.Expect(m == TestMethod::kRollingPaths, name + ": " + ci +
                                                         " not rolling");
        rolling.insert(ci);
      }
      std::vector<TestConfiguration> sequence;
      for (const auto& tc : plan.schedule) sequence.push_back(tc.configuration);
      for (size_t i = 1; i < sequence.size(); ++i) {
        check.Expect(Similarity(sequence[i - 1], sequence[i]) == 1,
                     name + ": distance != 1 at " + std::to_string(i));
      }
      if (sequence.size() <= 8) {
        ++oracle_checked;
        check.Expect(OrderingScore(sequence, rolling) ==
                         BruteForceBestOrdering(sequence, rolling).score,
                     name + ": not the oracle minimum");
      }
      std::vector<std::pair<int, int>> by_rank;  // (rank, transitions)
      for (size_t k = 0; k < counts.size(); ++k) {
        const CiId ci = "CI" + std::to_string(k + 1);
        int transitions = 0;
        for (size_t i = 1; i < sequence.size(); ++i) {
          if (*sequence[i - 1].Find(ci) != *sequence[i].Find(ci)) {
            ++transitions;
          }
        }
        // A single-mixture CI never changes under any order.
        if (counts[k] > 1) by_rank.emplace_back(ranks[k], transitions);
      }
      std::sort(by_rank.rbegin(), by_rank.rend());
      for (size_t k = 1; k < by_rank.size(); ++k) {
        check.Expect(by_rank[k - 1].second <= by_rank[k].second,
                     name + ": more critical CI changes more often");
      }
    } while (std::next_permutation(ranks.begin(), ranks.end()));
  }
  return check.Done(std::to_string(instances) + " instances, " +
                    std::to_string(oracle_checked) + " against the oracle");
}

// Returns the objective outcome and the literal big-flip count check.
std::pair<Outcome, Outcome> MethodSelection() {
  Check objective;
  Check lemma;
  std::mt19937 rng(77);
  int solved = 0;
  int unsafe = 0;
  while (solved < 250) {
    const int path_cis = std::uniform_int_distribution<int>(1, 5)(rng);
    const SystemModel model = testing::RandomSelectionInstance(rng, path_cis);
    const GroupRuns group = testing::SingleGroup(model);
    std::map<AppId, ltp::Seconds> execution;
    for (const auto& app : model.Applications()) {
      execution[app.id] = app.execution_time;
    }
    MethodSelectionProblem problem;
    MethodAssignment engine;
    try {
      problem = BuildSelectionProblem(
          model, group, GroupingTiming(model, group, execution));
      engine = SelectMethods(problem);
    } catch (const NoSafeMethodError&) {
      ++unsafe;
      continue;
    }
    ++solved;
    const MethodSelectionOptimum best = BruteForceMethodSelection(problem);
    const long got = RollingObjective(problem, engine);
    objective.Expect(got == best.objective,
                     "instance " + std::to_string(solved) + ": engine " +
                         std::to_string(got) + " vs optimum " +
                         std::to_string(best.objective));
    const auto count = [](const MethodAssignment& a, TestMethod m) {
      return std::count_if(a.begin(), a.end(),
                           [m](const auto& e) { return e.second == m; });
    };
    const long big = count(engine, TestMethod::kBigFlip);
    const long rolling = count(best.assignment, TestMethod::kRollingPaths);
    lemma.Expect(big <= rolling, "instance " + std::to_string(solved) +
                                     ": " + std::to_string(big) +
                                     " big flips vs " +
                                     std::to_string(rolling) +
                                     " rolling in the optimum");
  }
  const std::string n = std::to_string(solved) + " instances (" +
                        std::to_string(unsafe) + " unsafe skipped)";
  return {objective.Done(n), lemma.Done(n)};
}

Outcome SmallFlipArithmetic() {
  Check check;
  const int four[] = {4};
  SmallFlipParams p{10, 3, 30, 60, 2};
  check.Expect(SmallFlipCapacity(p) == 7, "capacity != 7");
  check.Expect(SmallFlipFeasible(four, 1, p), "first example not feasible");
  const int hosting[] = {1, 2, 4};
  for (int nodes = 1; nodes <= 6; ++nodes) {
    SmallFlipParams full{nodes, nodes, 0, 60, 1};
    check.Expect(!SmallFlipFeasible(hosting, 1, full),
                 "K = |Nodes| feasible at " + std::to_string(nodes));
  }
  SmallFlipParams slow{10, 3, 30, 60, 7};
  check.Expect(SmallFlipFeasible(four, 1, slow), "timing 30 not feasible");
  slow.timing = 600;
  check.Expect(!SmallFlipFeasible(four, 1, slow), "timing 600 feasible");
  return check.Done("three examples");
}

Outcome CostModel() {
  Check check;
  int rows = 0;
  for (int c = 1; c <= 24; ++c) {
    for (int p = 1; p <= 4; ++p) {
      for (int cuts = 1; cuts <= 5; ++cuts) {
        const std::string at = "c=" + std::to_string(c) +
                               " P=" + std::to_string(p) +
                               " cuts=" + std::to_string(cuts);
        const CostBreakdown rolling =
            DeploymentCost(TestMethod::kRollingPaths, c, p, cuts);
        check.Expect(rolling == CostBreakdown{c, c, c, c}, at + " rolling");
        check.Expect(
            DeploymentCost(TestMethod::kSingleStep, c, p, cuts).relocations ==
                0,
            at + " single");
        for (TestMethod m : {TestMethod::kBigFlip, TestMethod::kSmallFlip}) {
          const CostBreakdown flip =
              DeploymentCost(m, c, p, cuts, m == TestMethod::kSmallFlip
                                                ? std::max(1, c / 2)
                                                : 0);
          check.Expect(flip.instantiations == cuts && flip.removals == cuts,
                       at + " " + ToString(m) + " instantiations");
          check.Expect(flip.relocations == flip.iteration_count,
                       at + " " + ToString(m) + " relocations");
        }
        rows += 4;
      }
    }
  }
  return check.Done(std::to_string(rows) + " rows");
}

Outcome Determinism() {
  Check check;
  for (const char* name : {"paper_example", "empty_suite"}) {
    const SystemModel model = testing::LoadFixture(name);
    const std::string first = PlanToText(RunPipeline(model, {}));
    check.Expect(first == PlanToText(RunPipeline(model, {})),
                 std::string(name) + ": plans differ");
    const TestPlan parsed = ParsePlanText(first);
    check.Expect(PlanToText(parsed) == first,
                 std::string(name) + ": round trip differs");
  }
  try {
    RunPipeline(testing::LoadFixture("unsafe_ci6"), {});
    check.Expect(false, "unsafe_ci6 produced a plan");
  } catch (const NoSafeMethodError& e) {
    check.Expect(e.ci() == "CI6", "unsafe_ci6 blamed " + e.ci());
  }
  std::mt19937 rng(8);
  for (int i = 0; i < 50; ++i) {
    const SystemModel model = testing::RandomInstance(rng, {});
    const std::string text = PlanToText(RunPipeline(model, {}));
    check.Expect(text == PlanToText(RunPipeline(model, {})),
                 "random instance " + std::to_string(i) + " differs");
    check.Expect(PlanToText(ParsePlanText(text)) == text,
                 "random instance " + std::to_string(i) + " round trip");
  }
  return check.Done("fixtures and 50 random instances");
}

bool Invokes(const TestCase& tc, const TsiId& tsi) {
  return std::any_of(tc.main.begin(), tc.main.end(),
                     [&](const Invocation& inv) { return inv.tsi == tsi; });
}

// Breaks `pair` in a copy of `plan`; false when no mutation applies.
bool InjectViolation(TestPlan& plan, const PrecedencePair& pair) {
  for (auto& tc : plan.schedule) {
    auto lead = std::find_if(tc.main.begin(), tc.main.end(),
                             [&](auto& inv) { return inv.tsi == pair.leading; });
    auto follow = std::find_if(tc.main.begin(), tc.main.end(), [&](auto& inv) {
      return inv.tsi == pair.following;
    });
    if (lead != tc.main.end() && follow != tc.main.end()) {
      const Invocation moved = *follow;
      tc.main.erase(follow);
      tc.main.insert(tc.main.begin(), moved);
      return true;
    }
  }
  for (size_t i = 0; i < plan.schedule.size(); ++i) {
    const TestCase& tc = plan.schedule[i];
    if (Invokes(tc, pair.following) && !Invokes(tc, pair.leading)) {
      TestCase moved = tc;
      plan.schedule.erase(plan.schedule.begin() + static_cast<long>(i));
      plan.schedule.insert(plan.schedule.begin(), std::move(moved));
      return true;
    }
  }
  return false;
}

// Engine errors count only when the placement oracle finds no valid order.
Outcome PrecedenceSoundness() {
  Check check;
  std::mt19937 rng(909);
  testing::RandomOptions opts;
  opts.max_precedence = 10;
  int planned = 0;
  int refused = 0;
  int with_pairs = 0;
  int injected = 0;
  for (int i = 0; planned < 250 && i < 1000; ++i) {
    const SystemModel model = testing::RandomInstance(rng, opts);
    const std::string at = "instance " + std::to_string(i);
    TestPlan plan;
    try {
      plan = RunPipeline(model, {});
    } catch (const PrecedenceError& e) {
      ++refused;
      try {
        check.Expect(!PrecedenceSatisfiable(testing::InitialDraft(model),
                                            testing::TsiOf(model),
                                            model.precedence, 1u << 24),
                     at + ": " + e.what() + " but an order exists");
      } catch (const OracleCapError&) {
        check.Expect(false, at + ": " + e.what() + " undecided by the oracle");
      }
      continue;
    }
    ++planned;
    with_pairs += !model.precedence.empty();
    check.Expect(!FindPrecedenceViolation(testing::ScheduledTsis(plan),
                                          model.precedence),
                 at + ": scheduled violation");
    const VerificationReport report = VerifyPlan(model, plan);
    check.Expect(report.Find("precedence")->status == ClaimStatus::kPass,
                 at + ": verify rejects the plan");
    for (const auto& pair : model.precedence) {
      TestPlan broken = plan;
      if (!InjectViolation(broken, pair)) continue;
      ++injected;
      check.Expect(
          VerifyPlan(model, broken).Find("precedence")->status ==
              ClaimStatus::kFail,
          at + ": injected " + pair.leading + " -> " + pair.following +
              " not caught");
    }
  }
  check.Expect(planned >= 200, "only " + std::to_string(planned) + " plans");
  check.Expect(injected > 0, "no violation could be injected");
  return check.Done(std::to_string(planned) + " plans (" +
                    std::to_string(with_pairs) + " with precedence), " +
                    std::to_string(refused) +
                    " refusals confirmed unsatisfiable, " +
                    std::to_string(injected) + " injected violations caught");
}

}  // namespace
}  // namespace ltp

int main() {
  using ltp::Outcome;
  int failed = 0;
  auto report = [&](int id, const std::string& name, const Outcome& o,
                    double seconds) {
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << id << " " << name
              << " (" << o.detail << "; " << seconds << " s)" << std::endl;
  };
  auto timed = [](const std::function<void()>& f) {
    const auto start = std::chrono::steady_clock::now();
    f();
    return ltp::Elapsed(std::chrono::steady_clock::now() - start);
  };

  Outcome o;
  double t = timed([&] { o = ltp::WorkedExample(); });
  report(1, "worked example reproduction", o, t);

  std::pair<Outcome, Outcome> pair;
  t = timed([&] { pair = ltp::MergingAndCompleteness(); });
  if (t >= 60) pair.first = {false, "runtime over 60 s"};
  report(2, "merging minimality", pair.first, t);
  report(3, "coverage completeness", pair.second, t);

  t = timed([&] { o = ltp::GrayOrdering(); });
  if (t >= 30) o = {false, "runtime over 30 s"};
  report(4, "gray-code ordering", o, t);

  t = timed([&] { pair = ltp::MethodSelection(); });
  Outcome selection = pair.first;
  if (!pair.second.pass) {
    selection = {false, "objective " + pair.first.detail +
                            "; big-flip count bound " + pair.second.detail};
  }
  if (t >= 60) selection = {false, "runtime over 60 s"};
  report(5, "method selection optimality", selection, t);

  t = timed([&] { o = ltp::SmallFlipArithmetic(); });
  report(6, "small flip feasibility arithmetic", o, t);

  t = timed([&] { o = ltp::CostModel(); });
  report(7, "deployment cost rows", o, t);

  t = timed([&] { o = ltp::Determinism(); });
  report(8, "determinism and round trip", o, t);

  t = timed([&] { o = ltp::PrecedenceSoundness(); });
  report(9, "precedence soundness", o, t);

  return failed == 0 ? 0 : 1;
}

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

#include "ltp/oracle.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "ltp/ordering.h"

namespace ltp {

std::string ToString(SubconfigOrder order) {
  switch (order) {
    case SubconfigOrder::kLess:
      return "LESS";
    case SubconfigOrder::kGreater:
      return "GREATER";
    case SubconfigOrder::kEqual:
      return "EQUAL";
    case SubconfigOrder::kIncomparable:
      return "INCOMPARABLE";
  }
  return "?";
}

namespace {

using Assignment = std::map<CiId, Mixture>;

Assignment AssignmentOf(const TestConfiguration& c) {
  Assignment out;
  for (size_t i = 0; i < c.path.size() && i < c.mixtures.size(); ++i) {
    out.emplace(c.path.vertices[i], c.mixtures[i]);
  }
  return out;
}

// Every CI of `a` is assigned the same mixture in `b`.
bool Within(const Assignment& a, const Assignment& b) {
  for (const auto& [ci, mixture] : a) {
    auto it = b.find(ci);
    if (it == b.end() || it->second != mixture) return false;
  }
  return true;
}

}  // namespace

SubconfigOrder SubconfigCompare(const TestConfiguration& a,
                                const TestConfiguration& b) {
  const Assignment x = AssignmentOf(a);
  const Assignment y = AssignmentOf(b);
  if (x == y) return SubconfigOrder::kEqual;
  if (Within(x, y)) return SubconfigOrder::kLess;
  if (Within(y, x)) return SubconfigOrder::kGreater;
  return SubconfigOrder::kIncomparable;
}

std::vector<size_t> OrderGraph::Sources() const {
  std::vector<bool> has_incoming(nodes.size(), false);
  for (const auto& [from, to] : edges) has_incoming[to] = true;
  std::vector<size_t> out;
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (!has_incoming[i]) out.push_back(i);
  }
  return out;
}

OrderGraph BuildOrderGraph(const std::vector<TestConfiguration>& configs) {
  OrderGraph graph;
  std::set<Assignment> seen;
  for (const auto& c : configs) {
    if (seen.insert(AssignmentOf(c)).second) graph.nodes.push_back(c);
  }
  for (size_t u = 0; u < graph.nodes.size(); ++u) {
    for (size_t v = 0; v < graph.nodes.size(); ++v) {
      if (u != v && SubconfigCompare(graph.nodes[v], graph.nodes[u]) ==
                        SubconfigOrder::kLess) {
        graph.edges.emplace_back(u, v);
      }
    }
  }
  return graph;
}

int MinimalConfigCount(const std::vector<TestConfiguration>& configs,
                       size_t cap) {
  if (configs.size() > cap) {
    throw OracleCapError("order graph of " + std::to_string(configs.size()) +
                         " runs exceeds the cap of " + std::to_string(cap));
  }
  return static_cast<int>(BuildOrderGraph(configs).Sources().size());
}

bool PairwiseIncomparable(const std::vector<TestConfiguration>& configs) {
  for (size_t i = 0; i < configs.size(); ++i) {
    for (size_t j = i + 1; j < configs.size(); ++j) {
      if (SubconfigCompare(configs[i], configs[j]) !=
          SubconfigOrder::kIncomparable) {
        return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Method selection

long RollingObjective(const MethodSelectionProblem& problem,
                      const MethodAssignment& assignment) {
  std::vector<long> counts;
  for (const auto& c : problem.cis) {
    if (assignment.at(c.id) == TestMethod::kRollingPaths) {
      counts.push_back(c.mixture_count);
    }
  }
  if (counts.empty()) return 0;
  std::sort(counts.rbegin(), counts.rend());
  long configurations = 0;
  switch (problem.kind) {
    case CoverageKind::kAllBeMixtures:
      configurations = counts.front();
      break;
    case CoverageKind::kPairwiseBeMixtures:
      configurations = counts.size() == 1 ? counts[0] : counts[0] * counts[1];
      break;
    case CoverageKind::kAllBeMixturesPaths:
      configurations = std::accumulate(counts.begin(), counts.end(), 1L,
                                       std::multiplies<long>());
      break;
  }
  return 2 * configurations;
}

long TotalObjective(const MethodSelectionProblem& problem,
                    const MethodAssignment& assignment) {
  long total = RollingObjective(problem, assignment);
  for (const auto& c : problem.cis) {
    if (IsFlip(assignment.at(c.id))) total += 2L * c.clone_need;
  }
  return total;
}

MethodSelectionOptimum BruteForceMethodSelection(
    const MethodSelectionProblem& problem, bool total_objective, size_t cap) {
  const size_t n = problem.cis.size();
  if (n > cap) {
    throw OracleCapError("method selection over " + std::to_string(n) +
                         " CIs exceeds the cap of " + std::to_string(cap));
  }
  std::vector<std::vector<TestMethod>> allowed;
  for (const auto& c : problem.cis) {
    std::set<TestMethod> options = c.applicable;
    if (options.size() != 1) options.insert(TestMethod::kRollingPaths);
    allowed.emplace_back(options.begin(), options.end());
  }
  MethodSelectionOptimum best;
  bool found = false;
  std::vector<size_t> digits(n, 0);
  while (true) {
    MethodAssignment candidate;
    for (size_t i = 0; i < n; ++i) {
      candidate[problem.cis[i].id] = allowed[i][digits[i]];
    }
    if (AssignmentFitsResources(problem, candidate)) {
      const long objective = total_objective
                                 ? TotalObjective(problem, candidate)
                                 : RollingObjective(problem, candidate);
      if (!found || objective < best.objective) {
        best = {std::move(candidate), objective};
        found = true;
      }
    }
    bool advanced = false;
    for (size_t i = n; i-- > 0 && !advanced;) {
      if (++digits[i] < allowed[i].size()) {
        advanced = true;
      } else {
        digits[i] = 0;
      }
    }
    if (!advanced) break;
  }
  if (!found) throw PlanError("no resource-feasible method assignment");
  return best;
}

// ---------------------------------------------------------------------------
// Definition of K

std::optional<int> ComputeK(const std::vector<int>& counts,
                            bool with_repetition) {
  const size_t n = counts.size();
  if (n < 2) return 1;
  int k = 1;
  for (size_t i = 0; i < n; ++i) {
    std::vector<long> others;
    for (size_t j = 0; j < n; ++j) {
      if (j != i) others.push_back(counts[j]);
    }
    std::sort(others.begin(), others.end());
    int needed = 1;
    if (with_repetition) {
      const long base = others.front();
      long product = base;
      if (base <= 1) {
        if (counts[i] > 1) return std::nullopt;
      } else {
        while (product < counts[i]) {
          product *= base;
          ++needed;
        }
      }
    } else {
      long product = 1;
      needed = static_cast<int>(others.size()) + 1;
      for (size_t l = 0; l < others.size(); ++l) {
        product *= others[l];
        if (counts[i] <= product) {
          needed = static_cast<int>(l) + 1;
          break;
        }
      }
    }
    k = std::max(k, needed);
  }
  return k;
}

namespace {

// Whether every l-tuple of CIs other than each i bounds count_i.
bool HoldsForLength(const std::vector<int>& counts, bool with_repetition,
                    int l) {
  const int n = static_cast<int>(counts.size());
  for (int i = 0; i < n; ++i) {
    std::vector<int> others;
    for (int j = 0; j < n; ++j) {
      if (j != i) others.push_back(j);
    }
    const int m = static_cast<int>(others.size());
    if (!with_repetition && l > m) continue;  // no tuple exists
    std::vector<int> idx(l, 0);
    if (!with_repetition) std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      long product = 1;
      for (int a : idx) product *= counts[others[a]];
      if (counts[i] > product) return false;
      // Advance to the next tuple (all tuples, or strictly increasing ones).
      int p = l - 1;
      if (with_repetition) {
        while (p >= 0 && ++idx[p] == m) idx[p--] = 0;
      } else {
        while (p >= 0 && ++idx[p] > m - l + p) --p;
        if (p >= 0) {
          for (int q = p + 1; q < l; ++q) idx[q] = idx[q - 1] + 1;
        }
      }
      if (p < 0) break;
    }
  }
  return true;
}

}  // namespace

std::optional<int> ComputeKBruteForce(const std::vector<int>& counts,
                                      bool with_repetition, int max_l) {
  if (counts.size() < 2) return 1;
  if (!HoldsForLength(counts, with_repetition, max_l)) return std::nullopt;
  int k = max_l;
  while (k > 1 && HoldsForLength(counts, with_repetition, k - 1)) --k;
  return k;
}

BoundDiagnostic UpperBoundDiagnostic(int rolling, int big, int k, double g,
                                     double opt) {
  BoundDiagnostic out;
  if (rolling > big && big >= k) {
    out.row = "R > B >= K";
    out.bound = std::pow(opt, static_cast<double>(k) * k);
  } else if (rolling < big && big >= k) {
    out.row = "R < B and B >= K";
    out.bound = std::pow(opt, static_cast<double>(k));
  } else {
    out.row = "none";
  }
  if (out.bound) out.holds = g <= *out.bound;
  return out;
}

// ---------------------------------------------------------------------------
// Ordering

int OrderingScore(const std::vector<TestConfiguration>& sequence,
                  const std::set<CiId>& rolling) {
  int score = 0;
  for (size_t i = 1; i < sequence.size(); ++i) {
    for (const CiId& ci : rolling) {
      const Mixture* a = sequence[i - 1].Find(ci);
      const Mixture* b = sequence[i].Find(ci);
      if ((a == nullptr) != (b == nullptr) || (a && *a != *b)) ++score;
    }
  }
  return score;
}

OrderingOptimum BruteForceBestOrdering(
    const std::vector<TestConfiguration>& configs,
    const std::set<CiId>& rolling, size_t cap) {
  if (configs.size() > cap) {
    throw OracleCapError("ordering of " + std::to_string(configs.size()) +
                         " cases exceeds the cap of " + std::to_string(cap));
  }
  std::vector<size_t> order(configs.size());
  std::iota(order.begin(), order.end(), 0);
  OrderingOptimum best{0, order};
  bool first = true;
  std::vector<TestConfiguration> sequence(configs.size());
  do {
    for (size_t i = 0; i < order.size(); ++i) sequence[i] = configs[order[i]];
    const int score = OrderingScore(sequence, rolling);
    if (first || score < best.score) {
      best = {score, order};
      first = false;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

// ---------------------------------------------------------------------------
// Precedence satisfiability

namespace {

using CaseSet = std::vector<bool>;

// Depth-first placement of TSIs onto case sets. A TSI not yet placed is
// bounded by the cases it must occupy (single-candidate runs) and the cases
// it may occupy; edges implied by these bounds exist in every completion, so
// a cycle among them prunes the branch.
class PlacementSearch {
 public:
  PlacementSearch(std::vector<size_t> group_of,
                  const std::vector<PrecedencePair>& pairs,
                  std::map<TsiId, std::vector<std::vector<size_t>>> runs,
                  size_t cap)
      : cases_(group_of.size()),
        groups_(group_of.empty() ? 0
                                 : *std::max_element(group_of.begin(),
                                                     group_of.end()) +
                                       1),
        group_of_(std::move(group_of)),
        pairs_(pairs),
        runs_(std::move(runs)),
        cap_(cap) {
    for (const auto& [tsi, candidates] : runs_) {
      CaseSet must(cases_, false);
      CaseSet may(cases_, false);
      for (const auto& c : candidates) {
        if (c.size() == 1) must[c[0]] = true;
        for (size_t k : c) may[k] = true;
      }
      must_[tsi] = std::move(must);
      may_[tsi] = std::move(may);
      order_.push_back(tsi);
    }
    // Most constrained first: fewest runs with a choice.
    auto choices = [&](const TsiId& t) {
      return std::count_if(runs_.at(t).begin(), runs_.at(t).end(),
                           [](const auto& c) { return c.size() > 1; });
    };
    std::stable_sort(order_.begin(), order_.end(),
                     [&](const TsiId& a, const TsiId& b) {
                       return choices(a) < choices(b);
                     });
  }

  bool Search() { return Descend(0); }

 private:
  [[noreturn]] void Overflow() const {
    throw OracleCapError("precedence placements exceed the cap of " +
                         std::to_string(cap_));
  }

  // Every case set the runs of one TSI can jointly occupy.
  std::vector<CaseSet> Unions(const TsiId& tsi) {
    std::set<CaseSet> reachable = {CaseSet(cases_, false)};
    for (const auto& candidates : runs_.at(tsi)) {
      std::set<CaseSet> next;
      for (const auto& u : reachable) {
        for (size_t c : candidates) {
          CaseSet v = u;
          v[c] = true;
          next.insert(std::move(v));
          if (next.size() > cap_) Overflow();
        }
      }
      reachable = std::move(next);
    }
    return {reachable.begin(), reachable.end()};
  }

  bool Descend(size_t depth) {
    if (++visited_ > cap_) Overflow();
    if (!Acyclic()) return false;
    if (depth == order_.size()) return true;
    const TsiId& tsi = order_[depth];
    for (const auto& u : Unions(tsi)) {
      must_[tsi] = u;
      may_[tsi] = u;
      if (Descend(depth + 1)) return true;
    }
    return false;
  }

  bool Acyclic() const {
    std::set<std::pair<size_t, size_t>> between;
    std::set<std::pair<size_t, size_t>> within;
    for (const auto& p : pairs_) {
      auto l = must_.find(p.leading);
      auto f = must_.find(p.following);
      if (l == must_.end() || f == must_.end()) continue;
      const CaseSet& l_may = may_.at(p.leading);
      for (size_t a = 0; a < cases_; ++a) {
        if (!l->second[a]) continue;
        for (size_t b = 0; b < cases_; ++b) {
          if (!f->second[b] || l_may[b]) continue;
          if (group_of_[a] != group_of_[b]) {
            between.insert({group_of_[a], group_of_[b]});
          } else {
            within.insert({a, b});
          }
        }
      }
    }
    // Groupings run contiguously: edges between groupings order whole
    // groupings, the rest order cases inside one grouping.
    return IsDag(groups_, between) && IsDag(cases_, within);
  }

  static bool IsDag(size_t n,
                    const std::set<std::pair<size_t, size_t>>& edges) {
    std::vector<std::vector<size_t>> next(n);
    std::vector<int> indegree(n, 0);
    for (const auto& [a, b] : edges) {
      next[a].push_back(b);
      ++indegree[b];
    }
    std::vector<size_t> ready;
    for (size_t i = 0; i < n; ++i) {
      if (indegree[i] == 0) ready.push_back(i);
    }
    size_t seen = 0;
    while (!ready.empty()) {
      const size_t i = ready.back();
      ready.pop_back();
      ++seen;
      for (size_t j : next[i]) {
        if (--indegree[j] == 0) ready.push_back(j);
      }
    }
    return seen == n;
  }

  size_t cases_;
  size_t groups_;
  std::vector<size_t> group_of_;
  const std::vector<PrecedencePair>& pairs_;
  std::map<TsiId, std::vector<std::vector<size_t>>> runs_;
  size_t cap_;
  size_t visited_ = 0;
  std::vector<TsiId> order_;
  std::map<TsiId, CaseSet> must_;
  std::map<TsiId, CaseSet> may_;
};

}  // namespace

bool PrecedenceSatisfiable(const OrderedPlanDraft& draft,
                           const std::map<AppId, TsiId>& tsi_of,
                           const std::vector<PrecedencePair>& pairs,
                           size_t cap) {
  std::vector<const TestConfiguration*> cases;
  std::vector<size_t> group_of;
  for (size_t g = 0; g < draft.groups.size(); ++g) {
    for (const auto& c : draft.groups[g].cases) {
      cases.push_back(&c.configuration);
      group_of.push_back(g);
    }
  }
  std::set<TsiId> constrained;
  for (const auto& p : pairs) {
    constrained.insert(p.leading);
    constrained.insert(p.following);
  }
  std::map<TsiId, std::vector<std::vector<size_t>>> runs;
  for (const auto& g : draft.groups) {
    for (const auto& c : g.cases) {
      for (const auto& run : c.invocations) {
        const TsiId& tsi = tsi_of.at(run.app);
        if (!constrained.contains(tsi)) continue;
        std::vector<size_t> candidates;
        for (size_t k = 0; k < cases.size(); ++k) {
          auto restricted = cases[k]->Restrict(run.configuration.path);
          if (restricted && *restricted == run.configuration) {
            candidates.push_back(k);
          }
        }
        runs[tsi].push_back(std::move(candidates));
      }
    }
  }
  return PlacementSearch(std::move(group_of), pairs, std::move(runs), cap)
      .Search();
}

// ---------------------------------------------------------------------------
// Disturbance replay

int DisturbanceReport::TotalRelocations() const {
  int total = 0;
  for (const auto& [ci, n] : relocations) total += n;
  return total;
}

DisturbanceReport SimulateExecution(const TestPlan& plan,
                                    const SystemModel& model) {
  DisturbanceReport report;
  std::map<AppId, const TestCase*> last_case;
  std::set<std::pair<AppId, CiId>> flipped;

  auto relocate = [&](const CiId& ci) {
    ++report.relocations[ci];
    const ConfiguredInstance* instance = model.FindCi(ci);
    auto found = model.isolation.find(ci);
    if (instance == nullptr || found == model.isolation.end()) return;
    const Seconds relocation = found->second.relocation_time;
    auto tolerance = model.graph.MinDependentTolerance(ci);
    if (!tolerance || relocation <= *tolerance) return;
    for (const SiId& si : instance->service_instances) {
      report.outage[si] += relocation;
    }
  };

  for (const auto& g : plan.metadata.groupings) {
    for (const auto& [ci, method] : g.methods) report.relocations[ci] += 0;
  }
  for (const auto& tc : plan.schedule) {
    const GroupingInfo* g = plan.metadata.FindGrouping(tc.grouping);
    if (g == nullptr) {
      report.violations.push_back("test case '" + tc.id +
                                  "' names an unknown grouping");
      continue;
    }
    const TestCase* previous =
        last_case.count(tc.grouping) ? last_case[tc.grouping] : nullptr;
    for (const auto& [ci, method] : g->methods) {
      if (method == TestMethod::kRollingPaths) {
        const Mixture* now = tc.configuration.Find(ci);
        const Mixture* before =
            previous ? previous->configuration.Find(ci) : nullptr;
        if (!previous || !now || !before || *now != *before) relocate(ci);
      } else if (IsFlip(method)) {
        if (flipped.emplace(tc.grouping, ci).second) relocate(ci);
      }
    }
    last_case[tc.grouping] = &tc;
  }
  for (const auto& [si, outage] : report.outage) {
    const Seconds budget = model.AcceptableOutage(si);
    if (outage > budget) {
      std::ostringstream msg;
      msg << "SI '" << si << "' accrues " << outage
          << " s of noticeable outage against a budget of " << budget << " s";
      report.violations.push_back(msg.str());
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Plan verification

std::string ToString(ClaimStatus status) {
  switch (status) {
    case ClaimStatus::kPass:
      return "PASS";
    case ClaimStatus::kFail:
      return "FAIL";
    case ClaimStatus::kSkipped:
      return "SKIPPED";
  }
  return "?";
}

bool VerificationReport::Passed() const {
  return std::none_of(claims.begin(), claims.end(), [](const ClaimResult& c) {
    return c.status == ClaimStatus::kFail;
  });
}

const ClaimResult* VerificationReport::Find(const std::string& claim) const {
  for (const auto& c : claims) {
    if (c.claim == claim) return &c;
  }
  return nullptr;
}

std::string VerificationReport::ToText() const {
  std::ostringstream out;
  for (const auto& c : claims) {
    out << ToString(c.status) << " " << c.claim << "\n";
    for (const auto& d : c.details) out << "  " << d << "\n";
  }
  return out.str();
}

namespace {

void Fail(ClaimResult& claim, std::string detail) {
  claim.status = ClaimStatus::kFail;
  claim.details.push_back(std::move(detail));
}

using MandatedRuns =
    std::map<AppId, std::pair<TsiApplication, std::vector<TestConfiguration>>>;

MandatedRuns Mandated(const SystemModel& model) {
  MandatedRuns out;
  for (const auto& app : model.Applications()) {
    out[app.id] = {app,
                   GenerateConfigurations(app.path, app.coverage, model)};
  }
  return out;
}

ClaimResult CheckCompleteness(const MandatedRuns& mandated,
                              const TestPlan& plan) {
  ClaimResult claim{"completeness", ClaimStatus::kPass, {}};
  std::map<std::pair<AppId, TestConfiguration>, int> seen;
  for (const auto& tc : plan.schedule) {
    for (const auto& inv : tc.main) {
      auto app = mandated.find(inv.application);
      if (app == mandated.end() || app->second.first.tsi != inv.tsi) {
        Fail(claim, "unexpected run " + inv.application + " in " + tc.id);
        continue;
      }
      auto restricted = tc.configuration.Restrict(app->second.first.path);
      const auto& configs = app->second.second;
      if (!restricted || std::find(configs.begin(), configs.end(),
                                   *restricted) == configs.end()) {
        Fail(claim, "unexpected run " + inv.application + " in " + tc.id);
        continue;
      }
      if (++seen[{inv.application, *restricted}] == 2) {
        Fail(claim, "duplicate run " + inv.application + " under " +
                        restricted->Body());
      }
    }
  }
  for (const auto& [id, entry] : mandated) {
    for (const auto& c : entry.second) {
      if (!seen.count({id, c})) {
        Fail(claim, "missing run " + id + " under " + c.Body());
      }
    }
  }
  return claim;
}

ClaimResult CheckPrecedence(const SystemModel& model, const TestPlan& plan) {
  ClaimResult claim{"precedence", ClaimStatus::kPass, {}};
  std::vector<std::vector<TsiId>> cases;
  for (const auto& tc : plan.schedule) {
    std::vector<TsiId> tsis;
    for (const auto& inv : tc.main) tsis.push_back(inv.tsi);
    cases.push_back(std::move(tsis));
  }
  if (auto violation = FindPrecedenceViolation(cases, model.precedence)) {
    Fail(claim, "violated precedence " + violation->leading + " -> " +
                    violation->following);
  }
  return claim;
}

ClaimResult CheckMinimality(const MandatedRuns& mandated, const TestPlan& plan,
                            const OracleCaps& caps) {
  ClaimResult claim{"minimality", ClaimStatus::kPass, {}};
  std::vector<TestConfiguration> runs;
  for (const auto& [id, entry] : mandated) {
    runs.insert(runs.end(), entry.second.begin(), entry.second.end());
  }
  if (runs.size() > caps.runs) {
    claim.status = ClaimStatus::kSkipped;
    claim.details.push_back(std::to_string(runs.size()) +
                            " runs exceed the cap");
    return claim;
  }
  const int sources = MinimalConfigCount(runs, caps.runs);
  const int deployed = static_cast<int>(plan.schedule.size());
  if (deployed != sources) {
    Fail(claim, "deployed " + std::to_string(deployed) +
                    " configurations, order graph has " +
                    std::to_string(sources) + " sources");
  }
  return claim;
}

ClaimResult CheckOrdering(const TestPlan& plan, const OracleCaps& caps) {
  ClaimResult claim{"ordering", ClaimStatus::kPass, {}};
  int checked = 0;
  for (const auto& g : plan.metadata.groupings) {
    if (g.coverage.kind != CoverageKind::kAllBeMixturesPaths) continue;
    std::vector<TestConfiguration> sequence;
    std::set<std::set<TsiId>> classes;
    for (const auto& tc : plan.schedule) {
      if (tc.grouping != g.head) continue;
      sequence.push_back(tc.configuration);
      std::set<TsiId> tsis;
      for (const auto& inv : tc.main) tsis.insert(inv.tsi);
      classes.insert(std::move(tsis));
    }
    if (classes.size() != 1 || sequence.size() > caps.cases) continue;
    std::set<CiId> rolling;
    for (const auto& [ci, m] : g.methods) {
      if (m == TestMethod::kRollingPaths) rolling.insert(ci);
    }
    const int engine = OrderingScore(sequence, rolling);
    const int best = BruteForceBestOrdering(sequence, rolling, caps.cases).score;
    ++checked;
    if (engine != best) {
      Fail(claim, "grouping " + g.head + " scores " + std::to_string(engine) +
                      " relocations, optimum is " + std::to_string(best));
    }
  }
  if (checked == 0) {
    claim.status = ClaimStatus::kSkipped;
    claim.details.push_back("no single-class all-paths grouping within caps");
  }
  return claim;
}

ClaimResult CheckStructure(const SystemModel& model, const TestPlan& plan) {
  ClaimResult claim{"structure", ClaimStatus::kPass, {}};
  for (const auto& tc : plan.schedule) {
    const GroupingInfo* g = plan.metadata.FindGrouping(tc.grouping);
    if (g == nullptr) {
      Fail(claim, tc.id + " names an unknown grouping");
      continue;
    }
    if (tc.setup != "deploy " + tc.configuration.Body()) {
      Fail(claim, tc.id + " setup does not deploy its configuration");
    }
    if (tc.teardown != "remove " + tc.configuration.Body()) {
      Fail(claim, tc.id + " teardown does not remove its configuration");
    }
    if (tc.configuration.path != g->max_path) {
      Fail(claim, tc.id + " is not on its grouping's max path");
    }
    if (tc.main.empty()) Fail(claim, tc.id + " invokes nothing");
    for (const CiId& ci : g->max_path.vertices) {
      if (!g->methods.count(ci)) {
        Fail(claim, "grouping " + g->head + " has no method for " + ci);
      }
    }
    if (tc.role.pattern != PatternOf(g->methods)) {
      Fail(claim, tc.id + " pattern differs from its grouping's methods");
    }
  }
  for (const auto& tsi : model.suite) {
    if (!plan.metadata.framework_deployments.count(tsi.id)) {
      Fail(claim, "no framework deployment for " + tsi.id);
    }
  }
  return claim;
}

}  // namespace

VerificationReport VerifyPlan(const SystemModel& model, const TestPlan& plan,
                              const OracleCaps& caps) {
  VerificationReport report;
  const MandatedRuns mandated = Mandated(model);
  report.claims.push_back(CheckCompleteness(mandated, plan));
  report.claims.push_back(CheckPrecedence(model, plan));
  report.claims.push_back(CheckMinimality(mandated, plan, caps));
  report.claims.push_back(CheckOrdering(plan, caps));

  ClaimResult simulation{"simulation", ClaimStatus::kPass, {}};
  const DisturbanceReport disturbance = SimulateExecution(plan, model);
  for (const auto& v : disturbance.violations) Fail(simulation, v);
  report.claims.push_back(std::move(simulation));

  ClaimResult metrics{"metrics", ClaimStatus::kPass, {}};
  try {
    const PlanMetrics computed = ComputeMetrics(plan);
    for (const auto& [ci, n] : disturbance.relocations) {
      auto it = computed.cis.find(ci);
      const int reported = it == computed.cis.end() ? 0 : it->second.relocations;
      if (reported != n) {
        Fail(metrics, "CI " + ci + " metrics report " +
                          std::to_string(reported) + " relocations, replay " +
                          std::to_string(n));
      }
    }
    if (computed.total_relocations != disturbance.TotalRelocations()) {
      Fail(metrics, "relocation totals differ");
    }
  } catch (const PlanError& e) {
    Fail(metrics, e.what());
  }
  report.claims.push_back(std::move(metrics));
  report.claims.push_back(CheckStructure(model, plan));
  return report;
}

}  // namespace ltp

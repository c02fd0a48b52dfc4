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

#include "ltp/method_select.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ltp/coverage.h"

namespace ltp {

std::string ToString(TestMethod method) {
  switch (method) {
    case TestMethod::kSingleStep:
      return "SINGLE_STEP";
    case TestMethod::kRollingPaths:
      return "ROLLING_PATHS";
    case TestMethod::kSmallFlip:
      return "SMALL_FLIP";
    case TestMethod::kBigFlip:
      return "BIG_FLIP";
  }
  return "?";
}

std::optional<TestMethod> ParseTestMethod(const std::string& text) {
  for (TestMethod m : kAllMethods) {
    if (ToString(m) == text) return m;
  }
  return std::nullopt;
}

bool IsFlip(TestMethod method) {
  return method == TestMethod::kSmallFlip || method == TestMethod::kBigFlip;
}

long SmallFlipCapacity(const SmallFlipParams& p) {
  const long periods =
      p.cool_down_period > 0
          ? static_cast<long>(std::floor(p.timing / p.cool_down_period))
          : 0;
  return static_cast<long>(p.node_count) - p.k - periods * p.scaling_step;
}

long SmallFlipDemand(std::span<const int> hosting_counts, int width) {
  long demand = 0;
  for (int h : hosting_counts) demand += std::min(width, h);
  return demand;
}

bool SmallFlipFeasible(std::span<const int> hosting_counts, int width,
                       const SmallFlipParams& params) {
  const long capacity = SmallFlipCapacity(params);
  if (capacity <= 0 || hosting_counts.empty()) return false;
  // Demands are positive, so the cheapest singleton decides.
  long cheapest = std::numeric_limits<long>::max();
  for (int h : hosting_counts) {
    cheapest = std::min<long>(cheapest, std::min(width, h));
  }
  return cheapest <= capacity;
}

std::vector<size_t> SmallFlipBatch(std::span<const int> hosting_counts,
                                   int width, const SmallFlipParams& params) {
  const long capacity = SmallFlipCapacity(params);
  const size_t n = hosting_counts.size();
  if (n == 0 || n > 20) return {};
  std::vector<size_t> best;
  long best_demand = 0;
  for (unsigned long mask = 1; mask < (1ul << n); ++mask) {
    std::vector<size_t> subset;
    long demand = 0;
    for (size_t i = 0; i < n; ++i) {
      if (mask & (1ul << i)) {
        subset.push_back(i);
        demand += std::min(width, hosting_counts[i]);
      }
    }
    if (demand > capacity) continue;
    bool better = subset.size() > best.size() ||
                  (subset.size() == best.size() &&
                   (demand < best_demand ||
                    (demand == best_demand && subset < best)));
    if (best.empty() || better) {
      best = std::move(subset);
      best_demand = demand;
    }
  }
  return best;
}

Seconds GroupingTiming(const SystemModel& model, const GroupRuns& group,
                       const std::map<AppId, Seconds>& execution_times) {
  Seconds setup = 0;
  for (const CiId& ci : group.grouping.max_path.vertices) {
    const IsolationRecord& rec = model.Isolation(ci);
    if (rec.risk) setup += rec.snapshot_time + rec.clone_time;
  }
  Seconds total = setup * static_cast<double>(group.deployments.size());
  for (const auto& d : group.deployments) {
    for (const auto& r : d.runs) {
      auto it = execution_times.find(r.app);
      if (it != execution_times.end()) total += it->second;
    }
  }
  return total;
}

namespace {

std::vector<int> HostingCounts(const SystemModel& model, const CiId& ci) {
  std::vector<int> counts;
  for (const auto* env : model.EnvironmentsOf(ci)) {
    counts.push_back(static_cast<int>(env->hosting_nodes.size()));
  }
  return counts;
}

}  // namespace

SmallFlipParams SmallFlipParamsFor(const SystemModel& model, const CiId& ci,
                                   Seconds timing) {
  const ConfiguredInstance& instance = model.Ci(ci);
  return {static_cast<int>(instance.node_pool.size()),
          instance.component_count, timing, instance.cool_down_period,
          instance.scaling_step};
}

bool SmallFlipFeasibleFor(const SystemModel& model, const CiId& ci, int width,
                          Seconds timing) {
  return SmallFlipFeasible(HostingCounts(model, ci), width,
                           SmallFlipParamsFor(model, ci, timing));
}

std::set<EnvId> SmallFlipBatchEnvironments(const SystemModel& model,
                                           const CiId& ci, int width,
                                           Seconds timing) {
  const auto envs = model.EnvironmentsOf(ci);
  std::set<EnvId> out;
  for (size_t i : SmallFlipBatch(HostingCounts(model, ci), width,
                                 SmallFlipParamsFor(model, ci, timing))) {
    out.insert(envs[i]->id);
  }
  return out;
}

Applicability ApplicableMethods(const SystemModel& model, const CiId& ci,
                                int width, Seconds timing) {
  const ConfiguredInstance& instance = model.Ci(ci);
  const IsolationRecord& rec = model.Isolation(ci);
  const Seconds tolerance =
      model.graph.MinDependentTolerance(ci).value_or(
          std::numeric_limits<Seconds>::infinity());
  Applicability out;
  if (!rec.risk) out.methods.insert(TestMethod::kSingleStep);
  const bool rolling =
      rec.snapshot_time < tolerance && rec.relocation_time < tolerance;
  if (rolling) {
    out.methods.insert(TestMethod::kRollingPaths);
    if (SmallFlipFeasibleFor(model, ci, width, timing)) {
      out.methods.insert(TestMethod::kSmallFlip);
    }
  }
  const Seconds flip_outage =
      rec.snapshot_time + rec.clone_time + rec.relocation_time;
  bool big = true;
  for (const SiId& si : instance.service_instances) {
    if (!(flip_outage < model.AcceptableOutage(si))) big = false;
  }
  if (big) {
    out.methods.insert(TestMethod::kBigFlip);
    out.big_flip_preferred =
        rec.snapshot_time > tolerance || rec.relocation_time > tolerance;
  }
  if (out.methods.empty()) throw NoSafeMethodError(ci);
  return out;
}

MethodSelectionProblem BuildSelectionProblem(const SystemModel& model,
                                             const GroupRuns& group,
                                             Seconds timing) {
  MethodSelectionProblem problem;
  problem.kind = group.grouping.coverage.kind;
  const int width = group.grouping.coverage.width;
  std::set<NodeId> pool;
  int production = 0;
  for (const CiId& ci : group.grouping.max_path.vertices) {
    const ConfiguredInstance& instance = model.Ci(ci);
    pool.insert(instance.node_pool.begin(), instance.node_pool.end());
    production += instance.component_count;
    CiChoice choice;
    choice.id = ci;
    choice.applicable = ApplicableMethods(model, ci, width, timing).methods;
    choice.mixture_count =
        static_cast<int>(MixturesOf(model, ci, width).size());
    choice.clone_need = instance.component_count;
    choice.can_host = 2 * instance.component_count <=
                      static_cast<int>(instance.node_pool.size());
    problem.cis.push_back(std::move(choice));
  }
  problem.free_nodes = static_cast<int>(pool.size()) - production;
  return problem;
}

namespace {

bool Forced(const CiChoice& c) { return c.applicable.size() == 1; }

}  // namespace

MethodAssignment SelectMethods(const MethodSelectionProblem& problem,
                               std::vector<std::string>* notes) {
  MethodAssignment out;
  int remaining = problem.free_nodes;
  for (const auto& c : problem.cis) {
    if (!Forced(c)) continue;
    TestMethod m = *c.applicable.begin();
    out[c.id] = m;
    if (IsFlip(m)) remaining -= c.clone_need;
  }
  std::vector<const CiChoice*> rest;
  for (const auto& c : problem.cis) {
    if (!Forced(c)) rest.push_back(&c);
  }
  std::stable_sort(rest.begin(), rest.end(),
                   [](const CiChoice* a, const CiChoice* b) {
                     return a->mixture_count > b->mixture_count;
                   });
  for (const CiChoice* c : rest) {
    auto fits = [&] { return c->can_host && c->clone_need <= remaining; };
    if (c->applicable.contains(TestMethod::kSingleStep)) {
      out[c->id] = TestMethod::kSingleStep;
    } else if (c->applicable.contains(TestMethod::kBigFlip) && fits()) {
      out[c->id] = TestMethod::kBigFlip;
      remaining -= c->clone_need;
    } else if (c->applicable.contains(TestMethod::kSmallFlip) && fits()) {
      out[c->id] = TestMethod::kSmallFlip;
      remaining -= c->clone_need;
    } else {
      out[c->id] = TestMethod::kRollingPaths;
      if (notes != nullptr &&
          !c->applicable.contains(TestMethod::kRollingPaths)) {
        notes->push_back("CI '" + c->id +
                         "' falls back to ROLLING_PATHS for lack of nodes");
      }
    }
  }
  return out;
}

bool AssignmentFitsResources(const MethodSelectionProblem& problem,
                             const MethodAssignment& assignment) {
  long budget = problem.free_nodes;
  for (const auto& c : problem.cis) {
    TestMethod m = assignment.at(c.id);
    if (Forced(c) && IsFlip(m)) budget -= c.clone_need;
  }
  long used = 0;
  for (const auto& c : problem.cis) {
    TestMethod m = assignment.at(c.id);
    if (Forced(c) || !IsFlip(m)) continue;
    if (!c.can_host) return false;
    used += c.clone_need;
  }
  return used <= std::max(budget, 0L);
}

int ParallelCapacity(const SystemModel& model, const CallPath& path,
                     int width) {
  int capacity = std::numeric_limits<int>::max();
  for (const CiId& ci : path.vertices) {
    capacity = std::min(capacity, model.Ci(ci).component_count / width);
  }
  return std::max(1, capacity);
}

namespace {

int CeilDiv(int a, int b) { return (a + b - 1) / b; }

}  // namespace

CostBreakdown DeploymentCost(TestMethod method, int configurations,
                             int parallel_capacity, int cuts,
                             int first_batch) {
  const int p = std::max(1, parallel_capacity);
  CostBreakdown cost;
  switch (method) {
    case TestMethod::kRollingPaths:
      cost.iteration_count = configurations;
      cost.instantiations = cost.removals = cost.relocations = configurations;
      break;
    case TestMethod::kSingleStep:
      cost.iteration_count = CeilDiv(configurations, p);
      cost.instantiations = cost.removals = cost.iteration_count;
      cost.relocations = 0;
      break;
    case TestMethod::kBigFlip:
      cost.iteration_count = CeilDiv(configurations, p);
      cost.instantiations = cost.removals = cuts;
      cost.relocations = cost.iteration_count;
      break;
    case TestMethod::kSmallFlip: {
      const int first = std::clamp(first_batch, 0, configurations);
      cost.iteration_count =
          CeilDiv(first, p) + CeilDiv(configurations - first, p);
      cost.instantiations = cost.removals = cuts;
      cost.relocations = cost.iteration_count;
      break;
    }
  }
  return cost;
}

}  // namespace ltp

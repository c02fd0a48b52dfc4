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

#include "ltp/pipeline.h"

#include <sstream>

#include "ltp/coverage.h"
#include "ltp/merging.h"
#include "ltp/method_select.h"
#include "ltp/ordering.h"

namespace ltp {

Seconds PathSetupTime(const SystemModel& model,
                      const MethodAssignment& methods) {
  Seconds setup = 0;
  for (const auto& [ci, m] : methods) {
    const IsolationRecord& rec = model.Isolation(ci);
    if (IsFlip(m)) {
      setup += rec.snapshot_time + rec.clone_time;
    } else if (m == TestMethod::kRollingPaths) {
      setup += rec.snapshot_time;
    }
  }
  return setup;
}

namespace {

struct Stages {
  std::vector<TsiApplication> apps;
  std::map<AppId, TsiApplication> by_id;
  std::map<AppId, Seconds> execution_times;
  std::vector<Grouping> groupings;
  std::vector<GroupRuns> runs;
  std::map<AppId, GroupingDecisions> decisions;
  std::vector<std::string> notes;
};

Stages Prepare(const SystemModel& model) {
  Stages s;
  s.apps = model.Applications();
  for (const auto& app : s.apps) {
    s.by_id[app.id] = app;
    s.execution_times[app.id] = app.execution_time;
  }
  const AppConfigurations configs = GenerateAllConfigurations(s.apps, model);
  s.groupings = MergeCallPaths(s.apps);
  s.runs = RequiredRuns(s.groupings, s.apps, configs);
  for (const auto& group : s.runs) {
    const Grouping& g = group.grouping;
    GroupingDecisions d;
    const Seconds timing = GroupingTiming(model, group, s.execution_times);
    d.methods = SelectMethods(BuildSelectionProblem(model, group, timing),
                              &s.notes);
    d.parallel_capacity =
        ParallelCapacity(model, g.max_path, g.coverage.width);
    d.setup_time = PathSetupTime(model, d.methods);
    for (const CiId& ci : g.max_path.vertices) {
      d.cuts[ci] = model.Ci(ci).component_count;
    }
    s.decisions[g.head] = std::move(d);
  }
  return s;
}

Seconds ScheduleTiming(const GroupSchedule& group, Seconds setup,
                       const std::map<AppId, Seconds>& execution_times) {
  Seconds total = setup * static_cast<double>(group.cases.size());
  for (const auto& c : group.cases) {
    for (const auto& r : c.invocations) total += execution_times.at(r.app);
  }
  return total;
}

// Length of the leading run of cases whose small-flip CIs only use
// environments of the first batch.
int FirstBatch(const SystemModel& model, const GroupSchedule& group,
               const GroupingDecisions& d, Seconds timing) {
  std::map<CiId, std::set<EnvId>> batch;
  for (const auto& [ci, m] : d.methods) {
    if (m == TestMethod::kSmallFlip) {
      batch[ci] = SmallFlipBatchEnvironments(
          model, ci, group.grouping.coverage.width, timing);
    }
  }
  if (batch.empty()) return 0;
  int prefix = 0;
  for (const auto& c : group.cases) {
    bool inside = true;
    for (const auto& [ci, envs] : batch) {
      const Mixture* mixture = c.configuration.Find(ci);
      if (mixture == nullptr) continue;
      for (const auto& [env, n] : mixture->occurrences()) {
        if (n > 0 && !envs.contains(env)) inside = false;
      }
    }
    if (!inside) break;
    ++prefix;
  }
  return prefix;
}

}  // namespace

TestPlan RunPipeline(const SystemModel& model, const PipelineOptions& options) {
  Stages s = Prepare(model);

  std::map<AppId, TsiId> tsi_of;
  for (const auto& app : s.apps) tsi_of[app.id] = app.tsi;

  OrderedPlanDraft draft = BuildDraft(s.runs);
  draft.notes = s.notes;

  std::vector<std::string> downgrades;
  PrecedenceContext precedence;
  precedence.tsi_of = tsi_of;
  precedence.on_receive = [&](const GroupSchedule& group) {
    GroupingDecisions& d = s.decisions.at(group.grouping.head);
    const Seconds timing =
        ScheduleTiming(group, d.setup_time, s.execution_times);
    for (auto& [ci, m] : d.methods) {
      if (m == TestMethod::kSmallFlip &&
          !SmallFlipFeasibleFor(model, ci, group.grouping.coverage.width,
                                timing)) {
        m = TestMethod::kRollingPaths;
        downgrades.push_back("CI '" + ci + "' in grouping " +
                             group.grouping.head +
                             " downgraded to ROLLING_PATHS after receiving "
                             "runs");
      }
    }
  };
  draft = EnforcePrecedence(std::move(draft), model.precedence, precedence);

  ConfigurationOrderContext order;
  order.seed = options.seed;
  for (const auto& ci : model.cis) {
    order.criticality[ci.id] = model.Criticality(ci.id);
  }
  for (const auto& group : draft.groups) {
    const Grouping& g = group.grouping;
    for (const auto& [ci, m] : s.decisions.at(g.head).methods) {
      if (m == TestMethod::kRollingPaths) order.rolling[g.head].insert(ci);
    }
    auto& levels = order.levels[g.head];
    for (const CiId& ci : g.max_path.vertices) {
      levels.push_back(MixturesOf(model, ci, g.coverage.width));
    }
  }
  draft = OrderByConfiguration(std::move(draft), order, tsi_of);

  for (const auto& group : draft.groups) {
    GroupingDecisions& d = s.decisions.at(group.grouping.head);
    const Seconds timing =
        ScheduleTiming(group, d.setup_time, s.execution_times);
    d.first_batch = FirstBatch(model, group, d, timing);
  }
  draft.notes.insert(draft.notes.end(), downgrades.begin(), downgrades.end());

  TestPlan plan = BuildPlan(draft, s.decisions, s.by_id);
  Wrapup(plan, model);
  return plan;
}

std::string ExplainPipeline(const SystemModel& model) {
  Stages s = Prepare(model);
  std::ostringstream out;
  out << "applications:\n";
  for (const auto& app : s.apps) {
    out << "  " << app.id << " path " << app.path.ToString() << " coverage "
        << ToString(app.coverage.kind) << "/" << app.coverage.width << " "
        << ConfigurationCount(app.path, app.coverage, model)
        << " configurations\n";
  }
  out << "groupings:\n";
  for (const auto& group : s.runs) {
    const Grouping& g = group.grouping;
    const GroupingDecisions& d = s.decisions.at(g.head);
    out << "  " << g.head << " max path " << g.max_path.ToString()
        << " members {";
    bool first = true;
    for (const auto& m : g.members) {
      out << (first ? "" : ", ") << m;
      first = false;
    }
    out << "} deployments " << group.deployments.size() << " parallel "
        << d.parallel_capacity << "\n";
    for (const auto& [ci, m] : d.methods) {
      out << "    " << ci << ": " << ToString(m) << "\n";
    }
  }
  for (const auto& note : s.notes) out << "note: " << note << "\n";
  return out.str();
}

}  // namespace ltp

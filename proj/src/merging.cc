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

#include "ltp/merging.h"

#include <algorithm>
#include <tuple>

namespace ltp {

namespace {

int Strength(CoverageKind kind) {
  switch (kind) {
    case CoverageKind::kAllBeMixtures:
      return 0;
    case CoverageKind::kPairwiseBeMixtures:
      return 1;
    case CoverageKind::kAllBeMixturesPaths:
      return 2;
  }
  return 0;
}

}  // namespace

bool CoverageWeakerOrEqual(const CoverageCriterion& a,
                           const CoverageCriterion& b) {
  return Strength(a.kind) <= Strength(b.kind);
}

bool WidthLessOrEqual(const CoverageCriterion& a, const CoverageCriterion& b) {
  return a.width <= b.width;
}

namespace {

class Merger {
 public:
  explicit Merger(const std::vector<TsiApplication>& apps) {
    for (const auto& app : apps) apps_[app.id] = &app;
  }

  std::vector<Grouping> Run() {
    for (const auto& [id, unused] : apps_) Place(id);
    std::vector<Grouping> out;
    for (const auto& [head, members] : groups_) {
      out.push_back({head, members, app(head).path, app(head).coverage});
    }
    return out;
  }

 private:
  const TsiApplication& app(const AppId& id) const { return *apps_.at(id); }
  bool Sub(const AppId& a, const AppId& b) const {
    return IsSubPath(app(a).path, app(b).path);
  }
  bool Weaker(const AppId& a, const AppId& b) const {
    return CoverageWeakerOrEqual(app(a).coverage, app(b).coverage);
  }
  bool Narrower(const AppId& a, const AppId& b) const {
    return WidthLessOrEqual(app(a).coverage, app(b).coverage);
  }

  std::vector<AppId> Heads() const {
    std::vector<AppId> heads;
    for (const auto& [head, unused] : groups_) heads.push_back(head);
    return heads;
  }

  void Place(const AppId& c) {
    if (groups_.empty()) {
      groups_[c] = {c};
      return;
    }
    if (FullMerge(c)) return;
    for (const AppId& t : Heads()) {
      if (!groups_.contains(t)) continue;
      if (Sub(c, t) && !Weaker(c, t) && Narrower(c, t)) {
        groups_[t].insert(c);
      }
      if (Sub(t, c) && !Weaker(t, c) && Narrower(t, c)) {
        std::set<AppId> merged = groups_[t];
        merged.insert(c);
        groups_[c] = std::move(merged);
        AdjustPartial(c);
        return;
      }
    }
    // Residual group for runs no super-path group covers, or a fresh group
    // when nothing merged; both are {c}.
    groups_[c] = {c};
  }

  bool FullMerge(const AppId& c) {
    for (const AppId& t : Heads()) {
      if (app(c).path.size() == 1 && Sub(c, t) && Narrower(c, t)) {
        groups_[t].insert(c);
        return true;
      }
      if (Sub(c, t) && Weaker(c, t) && Narrower(c, t)) {
        groups_[t].insert(c);
        return true;
      }
      if (Sub(t, c) && Weaker(t, c) && Narrower(t, c)) {
        std::set<AppId> merged = std::move(groups_[t]);
        merged.insert(c);
        groups_.erase(t);
        groups_[c] = std::move(merged);
        AdjustFull(c);
        AdjustPartial(c);
        return true;
      }
    }
    return false;
  }

  void AdjustPartial(const AppId& head) {
    for (const AppId& n : Heads()) {
      if (n == head) continue;
      if (Sub(n, head) && !Weaker(n, head) && Narrower(n, head)) {
        groups_[head].insert(groups_[n].begin(), groups_[n].end());
      }
    }
  }

  void AdjustFull(const AppId& head) {
    for (const AppId& n : Heads()) {
      if (n == head) continue;
      if (Sub(n, head) && Weaker(n, head) && Narrower(n, head)) {
        groups_[head].insert(groups_[n].begin(), groups_[n].end());
        groups_.erase(n);
      }
    }
  }

  std::map<AppId, const TsiApplication*> apps_;
  std::map<AppId, std::set<AppId>> groups_;
};

}  // namespace

std::vector<Grouping> MergeCallPaths(std::vector<TsiApplication> apps) {
  std::sort(apps.begin(), apps.end(),
            [](const TsiApplication& a, const TsiApplication& b) {
              return a.id < b.id;
            });
  return Merger(apps).Run();
}

AppConfigurations GenerateAllConfigurations(
    const std::vector<TsiApplication>& apps, const SystemModel& model) {
  AppConfigurations out;
  for (const auto& app : apps) {
    out[app.id] = GenerateConfigurations(app.path, app.coverage, model);
  }
  return out;
}

namespace {

struct WorkingDeployment {
  size_t group;  // index into the working grouping list
  size_t order;  // position inside the grouping
  TestConfiguration configuration;
  std::vector<Run> runs;
};

bool Contains(const TestConfiguration& outer, const TestConfiguration& inner) {
  if (!IsSubPath(inner.path, outer.path)) return false;
  auto restricted = outer.Restrict(inner.path);
  return restricted && *restricted == inner;
}

}  // namespace

std::vector<GroupRuns> RequiredRuns(const std::vector<Grouping>& groupings,
                                    const std::vector<TsiApplication>& apps,
                                    const AppConfigurations& configurations) {
  std::map<AppId, const TsiApplication*> by_id;
  for (const auto& app : apps) by_id[app.id] = &app;
  std::map<AppId, std::set<TestConfiguration>> mandated;
  for (const auto& [id, configs] : configurations) {
    mandated[id].insert(configs.begin(), configs.end());
  }

  std::map<AppId, Grouping> groups;
  for (const auto& g : groupings) groups[g.head] = g;

  // Head configurations, each serving every member it covers.
  std::map<AppId, std::vector<WorkingDeployment>> per_group;
  std::map<AppId, std::set<TestConfiguration>> placed;
  for (const auto& [head, g] : groups) {
    for (const auto& h : configurations.at(head)) {
      WorkingDeployment d{0, 0, h, {}};
      for (const AppId& member : g.members) {
        const CallPath& path = by_id.at(member)->path;
        if (!IsSubPath(path, g.max_path)) continue;
        auto r = h.Restrict(path);
        if (r && mandated[member].contains(*r)) {
          d.runs.push_back({member, *r});
          placed[member].insert(*r);
        }
      }
      per_group[head].push_back(std::move(d));
    }
  }
  // Residual runs of members that head no grouping.
  for (const auto& app : apps) {
    for (const auto& c : configurations.at(app.id)) {
      if (placed[app.id].contains(c)) continue;
      if (!groups.contains(app.id)) {
        groups[app.id] = {app.id, {app.id}, app.path, app.coverage};
      }
      per_group[app.id].push_back({0, 0, c, {{app.id, c}}});
      placed[app.id].insert(c);
    }
  }

  // Fold contained deployments into a maximal container.
  std::vector<AppId> heads;
  std::vector<WorkingDeployment> all;
  for (const auto& [head, deployments] : per_group) {
    for (size_t i = 0; i < deployments.size(); ++i) {
      all.push_back(deployments[i]);
      all.back().group = heads.size();
      all.back().order = i;
    }
    heads.push_back(head);
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const WorkingDeployment& a, const WorkingDeployment& b) {
                     return std::make_tuple(-static_cast<long>(
                                                a.configuration.path.size()),
                                            a.group, a.order) <
                            std::make_tuple(-static_cast<long>(
                                                b.configuration.path.size()),
                                            b.group, b.order);
                   });
  std::vector<WorkingDeployment> survivors;
  for (auto& d : all) {
    auto host = std::find_if(survivors.begin(), survivors.end(),
                             [&](const WorkingDeployment& s) {
                               return Contains(s.configuration,
                                               d.configuration);
                             });
    if (host == survivors.end()) {
      survivors.push_back(std::move(d));
    } else {
      host->runs.insert(host->runs.end(), d.runs.begin(), d.runs.end());
    }
  }
  std::sort(survivors.begin(), survivors.end(),
            [](const WorkingDeployment& a, const WorkingDeployment& b) {
              return std::tie(a.group, a.order) < std::tie(b.group, b.order);
            });

  // One run per (TSI, configuration), first occurrence wins.
  std::set<std::pair<TsiId, TestConfiguration>> seen;
  std::vector<GroupRuns> out;
  for (auto& d : survivors) {
    std::sort(d.runs.begin(), d.runs.end(), [](const Run& a, const Run& b) {
      return std::tie(a.app, a.configuration) <
             std::tie(b.app, b.configuration);
    });
    std::vector<Run> kept;
    for (auto& r : d.runs) {
      if (seen.insert({by_id.at(r.app)->tsi, r.configuration}).second) {
        kept.push_back(std::move(r));
      }
    }
    if (kept.empty()) continue;
    const AppId& head = heads[d.group];
    if (out.empty() || out.back().grouping.head != head) {
      out.push_back({groups.at(head), {}});
    }
    for (const auto& r : kept) out.back().grouping.members.insert(r.app);
    out.back().deployments.push_back({d.configuration, std::move(kept)});
  }
  return out;
}

size_t DeploymentCount(const std::vector<GroupRuns>& runs) {
  size_t n = 0;
  for (const auto& g : runs) n += g.deployments.size();
  return n;
}

}  // namespace ltp

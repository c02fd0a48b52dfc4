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

#include "ltp/model.h"

#include <algorithm>
#include <deque>

namespace ltp {

Mixture::Mixture(std::map<EnvId, int> occurrences) {
  for (auto& [env, count] : occurrences) {
    if (count < 0) throw std::invalid_argument("negative occurrence count");
    if (count == 0) continue;
    occurrences_.emplace(env, count);
    width_ += count;
  }
}

int Mixture::count(const EnvId& env) const {
  auto it = occurrences_.find(env);
  return it == occurrences_.end() ? 0 : it->second;
}

std::string Mixture::ToString() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [env, count] : occurrences_) {
    for (int i = 0; i < count; ++i) {
      if (!first) out += ",";
      out += env;
      first = false;
    }
  }
  return out + "}";
}

void CallGraph::AddEdge(const CiId& source, const CiId& target,
                        Seconds tolerance) {
  vertices_.insert(source);
  vertices_.insert(target);
  edges_[{source, target}] = tolerance;
}

bool CallGraph::HasEdge(const CiId& source, const CiId& target) const {
  return edges_.contains({source, target});
}

std::optional<Seconds> CallGraph::Tolerance(const CiId& source,
                                            const CiId& target) const {
  auto it = edges_.find({source, target});
  if (it == edges_.end()) return std::nullopt;
  return it->second;
}

std::vector<CiId> CallGraph::Dependents(const CiId& ci) const {
  std::vector<CiId> out;
  for (const auto& [edge, tolerance] : edges_) {
    if (edge.second == ci) out.push_back(edge.first);
  }
  return out;
}

std::optional<Seconds> CallGraph::MinDependentTolerance(const CiId& ci) const {
  std::optional<Seconds> best;
  for (const auto& [edge, tolerance] : edges_) {
    if (edge.second != ci) continue;
    if (!best || tolerance < *best) best = tolerance;
  }
  return best;
}

std::set<CiId> CallGraph::TransitiveDependents(const CiId& ci) const {
  std::set<CiId> seen;
  std::deque<CiId> frontier = {ci};
  while (!frontier.empty()) {
    CiId current = frontier.front();
    frontier.pop_front();
    for (const CiId& dependent : Dependents(current)) {
      if (dependent == ci || !seen.insert(dependent).second) continue;
      frontier.push_back(dependent);
    }
  }
  return seen;
}

bool CallPath::contains(const CiId& ci) const {
  return std::find(vertices.begin(), vertices.end(), ci) != vertices.end();
}

std::vector<std::pair<CiId, CiId>> CallPath::edges() const {
  std::vector<std::pair<CiId, CiId>> out;
  for (size_t i = 1; i < vertices.size(); ++i) {
    out.emplace_back(vertices[i - 1], vertices[i]);
  }
  return out;
}

std::string CallPath::ToString() const {
  std::string out;
  for (size_t i = 0; i < vertices.size(); ++i) {
    if (i > 0) out += "->";
    out += vertices[i];
  }
  return out;
}

bool IsSubPath(const CallPath& a, const CallPath& b) {
  for (const CiId& v : a.vertices) {
    if (!b.contains(v)) return false;
  }
  const auto b_edges = b.edges();
  for (const auto& e : a.edges()) {
    if (std::find(b_edges.begin(), b_edges.end(), e) == b_edges.end()) {
      return false;
    }
  }
  return true;
}

std::optional<CallPath> MaxPath(std::span<const CallPath> paths) {
  if (paths.empty()) throw std::invalid_argument("max-path of an empty set");
  for (const CallPath& candidate : paths) {
    bool covers_all = std::all_of(
        paths.begin(), paths.end(),
        [&](const CallPath& p) { return IsSubPath(p, candidate); });
    if (covers_all) return candidate;
  }
  return std::nullopt;
}

bool IsValidPath(const CallPath& path, const CallGraph& graph) {
  if (path.vertices.empty()) return false;
  std::set<CiId> seen;
  for (const CiId& v : path.vertices) {
    if (!graph.HasVertex(v) || !seen.insert(v).second) return false;
  }
  for (const auto& [source, target] : path.edges()) {
    if (!graph.HasEdge(source, target)) return false;
  }
  return true;
}

std::string ToString(CoverageKind kind) {
  switch (kind) {
    case CoverageKind::kAllBeMixtures:
      return "ALL_BE_MIXTURES";
    case CoverageKind::kPairwiseBeMixtures:
      return "PAIRWISE_BE_MIXTURES";
    case CoverageKind::kAllBeMixturesPaths:
      return "ALL_BE_MIXTURES_PATHS";
  }
  return "?";
}

std::optional<CoverageKind> ParseCoverageKind(const std::string& text) {
  for (CoverageKind kind :
       {CoverageKind::kAllBeMixtures, CoverageKind::kPairwiseBeMixtures,
        CoverageKind::kAllBeMixturesPaths}) {
    if (ToString(kind) == text) return kind;
  }
  return std::nullopt;
}

AppId ApplicationId(const TsiId& tsi, size_t path_index) {
  return tsi + "-" + std::to_string(path_index);
}

std::string ToString(DeploymentOption option) {
  switch (option) {
    case DeploymentOption::kContainer:
      return "container";
    case DeploymentOption::kVm:
      return "vm";
    case DeploymentOption::kConfigurationManager:
      return "configuration_manager";
  }
  return "?";
}

std::optional<DeploymentOption> ParseDeploymentOption(
    const std::string& text) {
  for (DeploymentOption option :
       {DeploymentOption::kContainer, DeploymentOption::kVm,
        DeploymentOption::kConfigurationManager}) {
    if (ToString(option) == text) return option;
  }
  return std::nullopt;
}

const ConfiguredInstance* SystemModel::FindCi(const CiId& id) const {
  for (const auto& ci : cis) {
    if (ci.id == id) return &ci;
  }
  return nullptr;
}

const ConfiguredInstance& SystemModel::Ci(const CiId& id) const {
  const ConfiguredInstance* ci = FindCi(id);
  if (ci == nullptr) throw PlanError("unknown CI '" + id + "'");
  return *ci;
}

const IsolationRecord& SystemModel::Isolation(const CiId& id) const {
  auto it = isolation.find(id);
  if (it == isolation.end()) {
    throw PlanError("no isolation record for CI '" + id + "'");
  }
  return it->second;
}

std::vector<const BoundaryEnvironment*> SystemModel::EnvironmentsOf(
    const CiId& ci) const {
  std::vector<const BoundaryEnvironment*> out;
  for (const auto& env : environments) {
    if (env.owner_ci == ci) out.push_back(&env);
  }
  std::sort(out.begin(), out.end(),
            [](const BoundaryEnvironment* a, const BoundaryEnvironment* b) {
              return a->id < b->id;
            });
  return out;
}

const BoundaryEnvironment* SystemModel::FindEnvironment(
    const CiId& ci, const EnvId& env) const {
  for (const auto& e : environments) {
    if (e.owner_ci == ci && e.id == env) return &e;
  }
  return nullptr;
}

std::vector<TsiApplication> SystemModel::Applications() const {
  std::vector<TsiApplication> out;
  for (const auto& tsi : suite) {
    for (size_t i = 0; i < tsi.call_paths.size(); ++i) {
      out.push_back({ApplicationId(tsi.id, i), tsi.id, tsi.call_paths[i],
                     tsi.coverage, tsi.execution_time});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const TsiApplication& a, const TsiApplication& b) {
              return a.id < b.id;
            });
  return out;
}

const TestSuiteItem* SystemModel::FindTsi(const TsiId& id) const {
  for (const auto& tsi : suite) {
    if (tsi.id == id) return &tsi;
  }
  return nullptr;
}

int SystemModel::Criticality(const CiId& ci) const {
  const ConfiguredInstance& instance = Ci(ci);
  if (instance.criticality) return *instance.criticality;
  std::set<SiId> dependent_sis;
  for (const CiId& dependent : graph.TransitiveDependents(ci)) {
    const ConfiguredInstance* d = FindCi(dependent);
    if (d == nullptr) continue;
    dependent_sis.insert(d->service_instances.begin(),
                         d->service_instances.end());
  }
  return static_cast<int>(dependent_sis.size());
}

Seconds SystemModel::AcceptableOutage(const SiId& si) const {
  auto it = acceptable_outage.find(si);
  return it == acceptable_outage.end() ? 0 : it->second;
}

}  // namespace ltp

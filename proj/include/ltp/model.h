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

// Domain types shared by every planning stage: configured instances, their
// boundary environments, the CI call graph, call paths and the test suite.

#ifndef LTP_MODEL_H_
#define LTP_MODEL_H_

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ltp {

using CiId = std::string;
using NodeId = std::string;
using EnvId = std::string;
using SiId = std::string;
using TsiId = std::string;
// A TSI bound to one of its call paths, e.g. "TC1-0".
using AppId = std::string;
using FrameworkId = std::string;
using Seconds = double;

// Base class for every error the planner reports to callers.
class PlanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConfiguredInstance {
  CiId id;
  int component_count = 1;
  std::set<NodeId> node_pool;
  Seconds cool_down_period = 60;
  int scaling_step = 1;
  // Filled from the isolation matrix during validation.
  bool interference_risk = false;
  // Explicit rank, higher is more critical. Derived when absent.
  std::optional<int> criticality;
  std::vector<SiId> service_instances;
};

// Identified by (owner_ci, id): the same environment name may be listed under
// several CIs that share a collocation.
struct BoundaryEnvironment {
  EnvId id;
  CiId owner_ci;
  std::set<CiId> collocated_cis;
  std::set<NodeId> hosting_nodes;
};

// Occurrence counts over the boundary environments of one CI.
class Mixture {
 public:
  Mixture() = default;
  explicit Mixture(std::map<EnvId, int> occurrences);

  int width() const { return width_; }
  const std::map<EnvId, int>& occurrences() const { return occurrences_; }
  int count(const EnvId& env) const;

  // "{E1.1,E1.2,E1.2}": each environment repeated by its occurrence count.
  std::string ToString() const;

  friend bool operator==(const Mixture&, const Mixture&) = default;
  friend auto operator<=>(const Mixture&, const Mixture&) = default;

 private:
  std::map<EnvId, int> occurrences_;
  int width_ = 0;
};

class CallGraph {
 public:
  CallGraph() = default;

  void AddVertex(const CiId& ci) { vertices_.insert(ci); }
  // Weight is the tolerance time of `source` to `target` being unreachable.
  void AddEdge(const CiId& source, const CiId& target, Seconds tolerance);

  const std::set<CiId>& vertices() const { return vertices_; }
  const std::map<std::pair<CiId, CiId>, Seconds>& edges() const {
    return edges_;
  }
  bool HasVertex(const CiId& ci) const { return vertices_.contains(ci); }
  bool HasEdge(const CiId& source, const CiId& target) const;
  std::optional<Seconds> Tolerance(const CiId& source,
                                   const CiId& target) const;

  // CIs with an edge into `ci`, i.e. the CIs whose SIs depend on it.
  std::vector<CiId> Dependents(const CiId& ci) const;
  // Minimum tolerance over incoming edges; nullopt when nothing depends on ci.
  std::optional<Seconds> MinDependentTolerance(const CiId& ci) const;
  // Every CI that reaches `ci` through one or more edges.
  std::set<CiId> TransitiveDependents(const CiId& ci) const;

 private:
  std::set<CiId> vertices_;
  std::map<std::pair<CiId, CiId>, Seconds> edges_;
};

struct CallPath {
  std::vector<CiId> vertices;

  size_t size() const { return vertices.size(); }
  bool contains(const CiId& ci) const;
  std::vector<std::pair<CiId, CiId>> edges() const;
  // "CI3->CI2->CI5"
  std::string ToString() const;

  friend bool operator==(const CallPath&, const CallPath&) = default;
  friend auto operator<=>(const CallPath&, const CallPath&) = default;
};

// vertices(a) ⊆ vertices(b) and edges(a) ⊆ edges(b).
bool IsSubPath(const CallPath& a, const CallPath& b);

// The member that is a super-path of every member, if any. Throws
// std::invalid_argument on an empty set.
std::optional<CallPath> MaxPath(std::span<const CallPath> paths);

// Simple path whose consecutive pairs are graph edges.
bool IsValidPath(const CallPath& path, const CallGraph& graph);

enum class CoverageKind {
  kAllBeMixtures,       // strength-1 covering array
  kPairwiseBeMixtures,  // strength-2 covering array
  kAllBeMixturesPaths,  // full cartesian product
};

std::string ToString(CoverageKind kind);
std::optional<CoverageKind> ParseCoverageKind(const std::string& text);

struct CoverageCriterion {
  CoverageKind kind = CoverageKind::kAllBeMixtures;
  int width = 1;

  friend bool operator==(const CoverageCriterion&,
                         const CoverageCriterion&) = default;
};

struct TestSuiteItem {
  TsiId id;
  std::vector<CallPath> call_paths;
  CoverageCriterion coverage;
  Seconds execution_time = 0;
  FrameworkId runtime_framework;
};

struct TsiApplication {
  AppId id;
  TsiId tsi;
  CallPath path;
  CoverageCriterion coverage;
  Seconds execution_time = 0;
};

AppId ApplicationId(const TsiId& tsi, size_t path_index);

struct IsolationRecord {
  bool risk = false;
  Seconds snapshot_time = 0;
  Seconds clone_time = 0;
  Seconds relocation_time = 0;
};

struct PrecedencePair {
  TsiId leading;
  TsiId following;

  friend bool operator==(const PrecedencePair&,
                         const PrecedencePair&) = default;
  friend auto operator<=>(const PrecedencePair&,
                          const PrecedencePair&) = default;
};

enum class DeploymentOption { kContainer, kVm, kConfigurationManager };

std::string ToString(DeploymentOption option);
std::optional<DeploymentOption> ParseDeploymentOption(const std::string& text);

struct Framework {
  FrameworkId id;
  std::map<DeploymentOption, Seconds> options;
};

// Everything the planner consumes. Immutable once validated.
struct SystemModel {
  std::set<NodeId> nodes;
  std::vector<ConfiguredInstance> cis;
  std::vector<BoundaryEnvironment> environments;
  CallGraph graph;
  std::vector<TestSuiteItem> suite;
  std::vector<PrecedencePair> precedence;
  std::map<CiId, IsolationRecord> isolation;
  std::map<SiId, Seconds> acceptable_outage;
  std::map<FrameworkId, Framework> frameworks;
  std::string objective;

  const ConfiguredInstance* FindCi(const CiId& id) const;
  const ConfiguredInstance& Ci(const CiId& id) const;
  const IsolationRecord& Isolation(const CiId& id) const;
  // Sorted by environment id.
  std::vector<const BoundaryEnvironment*> EnvironmentsOf(const CiId& ci) const;
  const BoundaryEnvironment* FindEnvironment(const CiId& ci,
                                             const EnvId& env) const;
  // Sorted by application id.
  std::vector<TsiApplication> Applications() const;
  const TestSuiteItem* FindTsi(const TsiId& id) const;
  // Explicit rank, or the number of distinct SIs of CIs that transitively
  // depend on `ci`.
  int Criticality(const CiId& ci) const;
  // Outage budget of an SI; SIs without an entry have no budget.
  Seconds AcceptableOutage(const SiId& si) const;
};

}  // namespace ltp

#endif  // LTP_MODEL_H_

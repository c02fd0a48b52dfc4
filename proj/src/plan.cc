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

#include "ltp/plan.h"

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ltp {

using nlohmann::json;

const GroupingInfo* PlanMetadata::FindGrouping(const AppId& head) const {
  for (const auto& g : groupings) {
    if (g.head == head) return &g;
  }
  return nullptr;
}

namespace {

int Restrictiveness(TestMethod m) {
  switch (m) {
    case TestMethod::kRollingPaths:
      return 3;
    case TestMethod::kSmallFlip:
      return 2;
    case TestMethod::kBigFlip:
      return 1;
    case TestMethod::kSingleStep:
      return 0;
  }
  return 0;
}

}  // namespace

TestMethod PatternOf(const MethodAssignment& methods) {
  TestMethod pattern = TestMethod::kSingleStep;
  for (const auto& [ci, m] : methods) {
    if (Restrictiveness(m) > Restrictiveness(pattern)) pattern = m;
  }
  return pattern;
}

void ApplyMethodPattern(std::vector<TestCase>& cases,
                        const MethodAssignment& methods,
                        int parallel_capacity, int first_batch) {
  if (parallel_capacity < 1) {
    throw std::invalid_argument("parallel capacity must be >= 1");
  }
  const TestMethod pattern = PatternOf(methods);
  const int n = static_cast<int>(cases.size());
  bool has_small = false;
  for (const auto& [ci, m] : methods) {
    has_small = has_small || m == TestMethod::kSmallFlip;
  }
  const int split = has_small ? std::clamp(first_batch, 0, n) : 0;
  int fragment = -1;
  int in_fragment = 0;
  for (int i = 0; i < n; ++i) {
    StructuralRole& role = cases[i].role;
    role = StructuralRole{};
    role.pattern = pattern;
    if (has_small) role.batch = i < split ? 1 : 2;
    if (pattern != TestMethod::kRollingPaths) {
      const bool batch_start = has_small && i == split;
      if (fragment < 0 || in_fragment == parallel_capacity || batch_start) {
        ++fragment;
        in_fragment = 0;
      }
      role.fragment = fragment;
      ++in_fragment;
    }
  }
  if (n == 0) return;
  for (const auto& [ci, m] : methods) {
    if (m == TestMethod::kBigFlip) {
      cases.front().role.procedures_before.push_back({kCloneSetup, ci});
      cases.back().role.procedures_after.push_back({kRelocateAndRemove, ci});
    } else if (m == TestMethod::kSmallFlip) {
      const int at = (split >= 1 && split < n) ? split - 1 : n - 1;
      cases[at].role.procedures_after.push_back({kServiceRelocation, ci});
    }
  }
}

TestPlan BuildPlan(const OrderedPlanDraft& draft,
                   const std::map<AppId, GroupingDecisions>& decisions,
                   const std::map<AppId, TsiApplication>& applications) {
  TestPlan plan;
  CostBreakdown total{0, 0, 0, 0};
  for (const auto& g : draft.groups) {
    const GroupingDecisions& d = decisions.at(g.grouping.head);
    std::vector<TestCase> cases;
    int k = 0;
    for (const auto& c : g.cases) {
      TestCase tc;
      tc.id = g.grouping.head + "#" + std::to_string(++k);
      tc.grouping = g.grouping.head;
      tc.configuration = c.configuration;
      tc.setup = "deploy " + c.configuration.Body();
      tc.teardown = "remove " + c.configuration.Body();
      for (const auto& r : c.invocations) {
        tc.main.push_back({applications.at(r.app).tsi, r.app});
      }
      cases.push_back(std::move(tc));
    }
    ApplyMethodPattern(cases, d.methods, d.parallel_capacity, d.first_batch);
    plan.schedule.insert(plan.schedule.end(), cases.begin(), cases.end());

    GroupingInfo info;
    info.head = g.grouping.head;
    info.members.assign(g.grouping.members.begin(), g.grouping.members.end());
    info.max_path = g.grouping.max_path;
    info.coverage = g.grouping.coverage;
    info.parallel_capacity = d.parallel_capacity;
    info.first_batch = d.first_batch;
    info.setup_time = d.setup_time;
    info.methods = d.methods;
    const int configs = static_cast<int>(g.cases.size());
    for (const auto& [ci, m] : d.methods) {
      auto cut = d.cuts.find(ci);
      const CostBreakdown c =
          DeploymentCost(m, configs, d.parallel_capacity,
                         cut != d.cuts.end() ? cut->second : 0, d.first_batch);
      info.cost[ci] = c;
      total.instantiations += c.instantiations;
      total.removals += c.removals;
      total.relocations += c.relocations;
      total.iteration_count += c.iteration_count;
    }
    plan.metadata.groupings.push_back(std::move(info));
  }
  plan.metadata.cost_total = total;
  plan.metadata.notes = draft.notes;
  for (const auto& [id, app] : applications) {
    plan.metadata.applications[id] = {app.tsi, app.path, app.execution_time};
  }
  return plan;
}

FrameworkDeployment ChooseDeployment(const Framework& framework) {
  for (DeploymentOption option :
       {DeploymentOption::kContainer, DeploymentOption::kVm,
        DeploymentOption::kConfigurationManager}) {
    auto it = framework.options.find(option);
    if (it != framework.options.end()) {
      return {framework.id, option, it->second};
    }
  }
  throw PlanError("framework '" + framework.id + "' has no deployment option");
}

void Wrapup(TestPlan& plan, const SystemModel& model) {
  plan.objective = model.objective;
  for (const auto& tsi : model.suite) {
    plan.metadata.framework_deployments[tsi.id] =
        ChooseDeployment(model.frameworks.at(tsi.runtime_framework));
  }
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

json CostToJson(const CostBreakdown& c) {
  return {{"instantiations", c.instantiations},
          {"removals", c.removals},
          {"relocations", c.relocations},
          {"iteration_count", c.iteration_count}};
}

json ProceduresToJson(const std::vector<Procedure>& procedures) {
  json out = json::array();
  for (const auto& p : procedures) {
    out.push_back({{"procedure", p.kind}, {"ci", p.ci}});
  }
  return out;
}

}  // namespace

json ConfigurationToJson(const TestConfiguration& config) {
  json assignment = json::object();
  for (size_t i = 0; i < config.path.size(); ++i) {
    assignment[config.path.vertices[i]] = config.mixtures[i].occurrences();
  }
  return {{"path", config.path.vertices}, {"assignment", assignment}};
}

json SerializePlan(const TestPlan& plan) {
  json schedule = json::array();
  for (const auto& tc : plan.schedule) {
    json main = json::array();
    for (const auto& inv : tc.main) {
      main.push_back(
          {{"role", "main"}, {"tsi", inv.tsi}, {"application", inv.application}});
    }
    schedule.push_back(
        {{"id", tc.id},
         {"grouping", tc.grouping},
         {"configuration", ConfigurationToJson(tc.configuration)},
         {"setup", {{"role", "setup"}, {"body", tc.setup}}},
         {"main", std::move(main)},
         {"teardown", {{"role", "teardown"}, {"body", tc.teardown}}},
         {"structural_role",
          {{"pattern", ToString(tc.role.pattern)},
           {"fragment", tc.role.fragment},
           {"batch", tc.role.batch},
           {"procedures_before", ProceduresToJson(tc.role.procedures_before)},
           {"procedures_after", ProceduresToJson(tc.role.procedures_after)}}}});
  }

  const PlanMetadata& m = plan.metadata;
  json groupings = json::array();
  for (const auto& g : m.groupings) {
    json methods = json::object();
    for (const auto& [ci, method] : g.methods) methods[ci] = ToString(method);
    json cost = json::object();
    for (const auto& [ci, c] : g.cost) cost[ci] = CostToJson(c);
    groupings.push_back(
        {{"head", g.head},
         {"members", g.members},
         {"max_path", g.max_path.vertices},
         {"coverage",
          {{"kind", ToString(g.coverage.kind)}, {"width", g.coverage.width}}},
         {"parallel_capacity", g.parallel_capacity},
         {"first_batch", g.first_batch},
         {"setup_time", g.setup_time},
         {"methods", std::move(methods)},
         {"cost", std::move(cost)}});
  }
  json deployments = json::object();
  for (const auto& [tsi, d] : m.framework_deployments) {
    deployments[tsi] = {{"framework", d.framework},
                        {"option", ToString(d.option)},
                        {"deployment_time", d.deployment_time}};
  }
  json applications = json::object();
  for (const auto& [id, a] : m.applications) {
    applications[id] = {{"tsi", a.tsi},
                        {"path", a.path.vertices},
                        {"execution_time", a.execution_time}};
  }
  return {{"objective", plan.objective},
          {"schedule", std::move(schedule)},
          {"metadata",
           {{"groupings", std::move(groupings)},
            {"framework_deployments", std::move(deployments)},
            {"applications", std::move(applications)},
            {"cost_total", CostToJson(m.cost_total)},
            {"notes", m.notes}}}};
}

std::string PlanToText(const TestPlan& plan) {
  return SerializePlan(plan).dump(2) + "\n";
}

namespace {

// Typed access that throws PlanParseError naming the JSON pointer.
class Reader {
 public:
  [[noreturn]] static void Fail(const std::string& pointer,
                                const std::string& message) {
    throw PlanParseError((pointer.empty() ? "/" : pointer) + ": " + message);
  }

  static const json& Field(const json& obj, const std::string& base,
                           const std::string& key) {
    if (!obj.is_object()) Fail(base, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) Fail(base, "missing " + key);
    return *it;
  }

  static std::string String(const json& obj, const std::string& base,
                            const std::string& key) {
    const json& v = Field(obj, base, key);
    if (!v.is_string()) Fail(base + "/" + key, "expected a string");
    return v.get<std::string>();
  }

  static int Int(const json& obj, const std::string& base,
                 const std::string& key) {
    const json& v = Field(obj, base, key);
    if (!v.is_number_integer()) Fail(base + "/" + key, "expected an integer");
    return v.get<int>();
  }

  static double Number(const json& obj, const std::string& base,
                       const std::string& key) {
    const json& v = Field(obj, base, key);
    if (!v.is_number()) Fail(base + "/" + key, "expected a number");
    return v.get<double>();
  }

  static const json& Array(const json& obj, const std::string& base,
                           const std::string& key) {
    const json& v = Field(obj, base, key);
    if (!v.is_array()) Fail(base + "/" + key, "expected an array");
    return v;
  }

  static const json& Object(const json& obj, const std::string& base,
                            const std::string& key) {
    const json& v = Field(obj, base, key);
    if (!v.is_object()) Fail(base + "/" + key, "expected an object");
    return v;
  }

  static std::vector<std::string> Strings(const json& obj,
                                          const std::string& base,
                                          const std::string& key) {
    const json& arr = Array(obj, base, key);
    std::vector<std::string> out;
    for (size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_string()) {
        Fail(base + "/" + key + "/" + std::to_string(i), "expected a string");
      }
      out.push_back(arr[i].get<std::string>());
    }
    return out;
  }
};

TestMethod ParseMethodAt(const std::string& text, const std::string& pointer) {
  auto m = ParseTestMethod(text);
  if (!m) Reader::Fail(pointer, "unknown test method '" + text + "'");
  return *m;
}

CostBreakdown ParseCost(const json& obj, const std::string& base) {
  return {Reader::Int(obj, base, "instantiations"),
          Reader::Int(obj, base, "removals"),
          Reader::Int(obj, base, "relocations"),
          Reader::Int(obj, base, "iteration_count")};
}

std::vector<Procedure> ParseProcedures(const json& obj,
                                       const std::string& base,
                                       const std::string& key) {
  const json& arr = Reader::Array(obj, base, key);
  std::vector<Procedure> out;
  for (size_t i = 0; i < arr.size(); ++i) {
    const std::string p = base + "/" + key + "/" + std::to_string(i);
    out.push_back(
        {Reader::String(arr[i], p, "procedure"), Reader::String(arr[i], p, "ci")});
  }
  return out;
}

TestConfiguration ParseConfiguration(const json& obj,
                                     const std::string& base) {
  TestConfiguration config;
  config.path.vertices = Reader::Strings(obj, base, "path");
  const json& assignment = Reader::Object(obj, base, "assignment");
  for (const CiId& ci : config.path.vertices) {
    const std::string p = base + "/assignment";
    const json& mixture = Reader::Object(assignment, p, ci);
    std::map<EnvId, int> counts;
    for (auto it = mixture.begin(); it != mixture.end(); ++it) {
      if (!it.value().is_number_integer() || it.value().get<int>() < 0) {
        Reader::Fail(p + "/" + ci + "/" + it.key(),
                     "expected a non-negative integer");
      }
      counts[it.key()] = it.value().get<int>();
    }
    config.mixtures.emplace_back(std::move(counts));
  }
  if (assignment.size() != config.path.size()) {
    Reader::Fail(base + "/assignment", "assignment does not match path");
  }
  return config;
}

}  // namespace

TestPlan ParsePlan(const json& doc) {
  TestPlan plan;
  plan.objective = Reader::String(doc, "", "objective");
  const json& schedule = Reader::Array(doc, "", "schedule");
  for (size_t i = 0; i < schedule.size(); ++i) {
    const std::string base = "/schedule/" + std::to_string(i);
    const json& entry = schedule[i];
    TestCase tc;
    tc.id = Reader::String(entry, base, "id");
    tc.grouping = Reader::String(entry, base, "grouping");
    tc.configuration =
        ParseConfiguration(Reader::Object(entry, base, "configuration"),
                           base + "/configuration");
    const json& setup = Reader::Object(entry, base, "setup");
    if (Reader::String(setup, base + "/setup", "role") != "setup") {
      Reader::Fail(base + "/setup/role", "expected role 'setup'");
    }
    tc.setup = Reader::String(setup, base + "/setup", "body");
    const json& main = Reader::Array(entry, base, "main");
    if (main.empty()) Reader::Fail(base + "/main", "empty main");
    for (size_t k = 0; k < main.size(); ++k) {
      const std::string p = base + "/main/" + std::to_string(k);
      if (Reader::String(main[k], p, "role") != "main") {
        Reader::Fail(p + "/role", "expected role 'main'");
      }
      tc.main.push_back({Reader::String(main[k], p, "tsi"),
                         Reader::String(main[k], p, "application")});
    }
    const json& teardown = Reader::Object(entry, base, "teardown");
    if (Reader::String(teardown, base + "/teardown", "role") != "teardown") {
      Reader::Fail(base + "/teardown/role", "expected role 'teardown'");
    }
    tc.teardown = Reader::String(teardown, base + "/teardown", "body");
    const std::string rbase = base + "/structural_role";
    const json& role = Reader::Object(entry, base, "structural_role");
    tc.role.pattern = ParseMethodAt(Reader::String(role, rbase, "pattern"),
                                    rbase + "/pattern");
    tc.role.fragment = Reader::Int(role, rbase, "fragment");
    tc.role.batch = Reader::Int(role, rbase, "batch");
    tc.role.procedures_before =
        ParseProcedures(role, rbase, "procedures_before");
    tc.role.procedures_after = ParseProcedures(role, rbase, "procedures_after");
    plan.schedule.push_back(std::move(tc));
  }

  const json& meta = Reader::Object(doc, "", "metadata");
  const json& groupings = Reader::Array(meta, "/metadata", "groupings");
  for (size_t i = 0; i < groupings.size(); ++i) {
    const std::string base = "/metadata/groupings/" + std::to_string(i);
    const json& g = groupings[i];
    GroupingInfo info;
    info.head = Reader::String(g, base, "head");
    info.members = Reader::Strings(g, base, "members");
    info.max_path.vertices = Reader::Strings(g, base, "max_path");
    const json& coverage = Reader::Object(g, base, "coverage");
    auto kind = ParseCoverageKind(
        Reader::String(coverage, base + "/coverage", "kind"));
    if (!kind) Reader::Fail(base + "/coverage/kind", "unknown coverage kind");
    info.coverage = {*kind, Reader::Int(coverage, base + "/coverage", "width")};
    info.parallel_capacity = Reader::Int(g, base, "parallel_capacity");
    info.first_batch = Reader::Int(g, base, "first_batch");
    info.setup_time = Reader::Number(g, base, "setup_time");
    const json& methods = Reader::Object(g, base, "methods");
    for (auto it = methods.begin(); it != methods.end(); ++it) {
      const std::string p = base + "/methods/" + it.key();
      if (!it.value().is_string()) Reader::Fail(p, "expected a string");
      info.methods[it.key()] = ParseMethodAt(it.value().get<std::string>(), p);
    }
    const json& cost = Reader::Object(g, base, "cost");
    for (auto it = cost.begin(); it != cost.end(); ++it) {
      info.cost[it.key()] = ParseCost(it.value(), base + "/cost/" + it.key());
    }
    plan.metadata.groupings.push_back(std::move(info));
  }
  const json& deployments =
      Reader::Object(meta, "/metadata", "framework_deployments");
  for (auto it = deployments.begin(); it != deployments.end(); ++it) {
    const std::string p = "/metadata/framework_deployments/" + it.key();
    auto option = ParseDeploymentOption(Reader::String(it.value(), p, "option"));
    if (!option) Reader::Fail(p + "/option", "unknown deployment option");
    plan.metadata.framework_deployments[it.key()] = {
        Reader::String(it.value(), p, "framework"), *option,
        Reader::Number(it.value(), p, "deployment_time")};
  }
  const json& applications = Reader::Object(meta, "/metadata", "applications");
  for (auto it = applications.begin(); it != applications.end(); ++it) {
    const std::string p = "/metadata/applications/" + it.key();
    plan.metadata.applications[it.key()] = {
        Reader::String(it.value(), p, "tsi"),
        {Reader::Strings(it.value(), p, "path")},
        Reader::Number(it.value(), p, "execution_time")};
  }
  plan.metadata.cost_total = ParseCost(
      Reader::Object(meta, "/metadata", "cost_total"), "/metadata/cost_total");
  plan.metadata.notes = Reader::Strings(meta, "/metadata", "notes");
  return plan;
}

TestPlan ParsePlanText(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw PlanParseError(std::string("malformed JSON: ") + e.what());
  }
  return ParsePlan(doc);
}

// ---------------------------------------------------------------------------
// Metrics

PlanMetrics ComputeMetrics(const TestPlan& plan) {
  PlanMetrics out;
  out.test_cases = static_cast<int>(plan.schedule.size());
  for (const auto& g : plan.metadata.groupings) {
    for (const auto& [ci, cost] : g.cost) {
      auto [it, inserted] = out.cis.try_emplace(ci);
      if (inserted) it->second.cost.iteration_count = 0;
      CostBreakdown& sum = it->second.cost;
      sum.instantiations += cost.instantiations;
      sum.removals += cost.removals;
      sum.relocations += cost.relocations;
      sum.iteration_count += cost.iteration_count;
    }
  }

  std::map<AppId, const TestCase*> previous;  // per grouping
  std::set<std::pair<AppId, CiId>> flipped;
  // Fragment wall time: the slowest case of each parallel fragment.
  std::map<std::pair<AppId, int>, Seconds> fragment_time;
  for (const auto& tc : plan.schedule) {
    const GroupingInfo* g = plan.metadata.FindGrouping(tc.grouping);
    if (g == nullptr) {
      throw PlanParseError("test case '" + tc.id + "' names unknown grouping '" +
                           tc.grouping + "'");
    }
    const TestCase* prev = previous.count(tc.grouping)
                               ? previous.at(tc.grouping)
                               : nullptr;
    for (const auto& [ci, method] : g->methods) {
      int& relocations = out.cis[ci].relocations;
      switch (method) {
        case TestMethod::kRollingPaths: {
          const Mixture* now = tc.configuration.Find(ci);
          const Mixture* before =
              prev != nullptr ? prev->configuration.Find(ci) : nullptr;
          if (prev == nullptr || now == nullptr || before == nullptr ||
              *now != *before) {
            ++relocations;
          }
          break;
        }
        case TestMethod::kBigFlip:
        case TestMethod::kSmallFlip:
          if (flipped.insert({tc.grouping, ci}).second) ++relocations;
          break;
        case TestMethod::kSingleStep:
          break;
      }
    }
    previous[tc.grouping] = &tc;

    Seconds time = g->setup_time;
    for (const auto& inv : tc.main) {
      auto it = plan.metadata.applications.find(inv.application);
      if (it != plan.metadata.applications.end()) {
        time += it->second.execution_time;
      }
    }
    if (tc.role.fragment < 0) {
      out.wall_time += time;
      ++out.fragments;
    } else {
      auto key = std::make_pair(tc.grouping, tc.role.fragment);
      auto [it, inserted] = fragment_time.emplace(key, time);
      if (inserted) {
        ++out.fragments;
      } else {
        it->second = std::max(it->second, time);
      }
    }
  }
  for (const auto& [key, time] : fragment_time) out.wall_time += time;
  for (const auto& [ci, m] : out.cis) out.total_relocations += m.relocations;
  return out;
}

json MetricsToJson(const PlanMetrics& metrics) {
  json cis = json::object();
  for (const auto& [ci, m] : metrics.cis) {
    cis[ci] = {{"relocations", m.relocations}, {"cost", CostToJson(m.cost)}};
  }
  return {{"cis", std::move(cis)},
          {"test_cases", metrics.test_cases},
          {"fragments", metrics.fragments},
          {"total_relocations", metrics.total_relocations},
          {"estimated_wall_time", metrics.wall_time}};
}

std::string MetricsToText(const PlanMetrics& metrics) {
  std::ostringstream out;
  out << std::left << std::setw(12) << "CI" << std::right << std::setw(13)
      << "relocations" << std::setw(16) << "instantiations" << std::setw(10)
      << "removals" << std::setw(12) << "iterations"
      << "\n";
  for (const auto& [ci, m] : metrics.cis) {
    out << std::left << std::setw(12) << ci << std::right << std::setw(13)
        << m.relocations << std::setw(16) << m.cost.instantiations
        << std::setw(10) << m.cost.removals << std::setw(12)
        << m.cost.iteration_count << "\n";
  }
  out << "test cases: " << metrics.test_cases << "\n"
      << "fragments: " << metrics.fragments << "\n"
      << "total relocations: " << metrics.total_relocations << "\n"
      << "estimated wall time: " << metrics.wall_time << " s\n";
  return out.str();
}

}  // namespace ltp

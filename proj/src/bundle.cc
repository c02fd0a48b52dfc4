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

#include "ltp/bundle.h"

#include <fstream>
#include <functional>

namespace ltp {

using nlohmann::json;

std::string Diagnostic::ToString() const {
  std::string out = document + ":" + (pointer.empty() ? "/" : pointer) + ": " +
                    message;
  if (!id.empty()) out += " '" + id + "'";
  return out;
}

namespace {

std::string Ptr(const std::string& base, const std::string& key) {
  return base + "/" + key;
}

std::string Ptr(const std::string& base, size_t index) {
  return base + "/" + std::to_string(index);
}

// Typed field access that records a diagnostic instead of throwing.
class DocReader {
 public:
  DocReader(std::string document, std::vector<Diagnostic>* errors)
      : document_(std::move(document)), errors_(errors) {}

  void Error(const std::string& pointer, const std::string& message,
             const std::string& id = "") {
    errors_->push_back({document_, pointer, id, message});
  }

  const json* Field(const json& obj, const std::string& base, const char* key,
                    bool required) {
    if (!obj.is_object()) {
      Error(base, "expected an object");
      return nullptr;
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) Error(Ptr(base, key), "missing field");
      return nullptr;
    }
    return &*it;
  }

  std::optional<std::string> String(const json& obj, const std::string& base,
                                    const char* key, bool required = true) {
    const json* v = Field(obj, base, key, required);
    if (v == nullptr) return std::nullopt;
    if (!v->is_string()) {
      Error(Ptr(base, key), "expected a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<double> Number(const json& obj, const std::string& base,
                               const char* key, bool required = true) {
    const json* v = Field(obj, base, key, required);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number()) {
      Error(Ptr(base, key), "expected a number");
      return std::nullopt;
    }
    return v->get<double>();
  }

  std::optional<int> Int(const json& obj, const std::string& base,
                         const char* key, bool required = true) {
    const json* v = Field(obj, base, key, required);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number_integer()) {
      Error(Ptr(base, key), "expected an integer");
      return std::nullopt;
    }
    return v->get<int>();
  }

  // Accepts true/false as well as the 0/1 notation of the isolation matrix.
  std::optional<bool> Bool(const json& obj, const std::string& base,
                           const char* key, bool required = true) {
    const json* v = Field(obj, base, key, required);
    if (v == nullptr) return std::nullopt;
    if (v->is_boolean()) return v->get<bool>();
    if (v->is_number_integer() && (*v == 0 || *v == 1)) return *v == 1;
    Error(Ptr(base, key), "expected a boolean or 0/1");
    return std::nullopt;
  }

  const json* Array(const json& obj, const std::string& base, const char* key,
                    bool required = true) {
    const json* v = Field(obj, base, key, required);
    if (v == nullptr) return nullptr;
    if (!v->is_array()) {
      Error(Ptr(base, key), "expected an array");
      return nullptr;
    }
    return v;
  }

  const json* Object(const json& obj, const std::string& base, const char* key,
                     bool required = true) {
    const json* v = Field(obj, base, key, required);
    if (v == nullptr) return nullptr;
    if (!v->is_object()) {
      Error(Ptr(base, key), "expected an object");
      return nullptr;
    }
    return v;
  }

  std::vector<std::string> Strings(const json& arr, const std::string& base) {
    std::vector<std::string> out;
    for (size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_string()) {
        Error(Ptr(base, i), "expected a string");
        continue;
      }
      out.push_back(arr[i].get<std::string>());
    }
    return out;
  }

 private:
  std::string document_;
  std::vector<Diagnostic>* errors_;
};

void ParseSystem(const json& doc, SystemModel& model,
                 std::vector<Diagnostic>& errors) {
  DocReader r(kSystemDoc, &errors);
  if (const json* nodes = r.Array(doc, "", "nodes")) {
    for (auto& n : r.Strings(*nodes, "/nodes")) model.nodes.insert(n);
  }
  if (const json* cis = r.Array(doc, "", "configured_instances")) {
    for (size_t i = 0; i < cis->size(); ++i) {
      const json& c = (*cis)[i];
      const std::string base = Ptr("/configured_instances", i);
      ConfiguredInstance ci;
      ci.id = r.String(c, base, "id").value_or("");
      ci.component_count = r.Int(c, base, "component_count").value_or(0);
      if (const json* pool = r.Array(c, base, "node_pool")) {
        for (auto& n : r.Strings(*pool, Ptr(base, "node_pool"))) {
          ci.node_pool.insert(n);
        }
      }
      ci.cool_down_period = r.Number(c, base, "cool_down_period").value_or(0);
      ci.scaling_step = r.Int(c, base, "scaling_step").value_or(0);
      ci.criticality = r.Int(c, base, "criticality", /*required=*/false);
      if (const json* sis =
              r.Array(c, base, "service_instances", /*required=*/false)) {
        ci.service_instances =
            r.Strings(*sis, Ptr(base, "service_instances"));
      } else {
        ci.service_instances = {ci.id};
      }
      model.cis.push_back(std::move(ci));
    }
  }
  if (const json* envs =
          r.Array(doc, "", "boundary_environments", /*required=*/false)) {
    for (size_t i = 0; i < envs->size(); ++i) {
      const json& e = (*envs)[i];
      const std::string base = Ptr("/boundary_environments", i);
      BoundaryEnvironment env;
      env.id = r.String(e, base, "id").value_or("");
      env.owner_ci = r.String(e, base, "owner_ci").value_or("");
      if (const json* coll = r.Array(e, base, "collocated_cis")) {
        for (auto& c : r.Strings(*coll, Ptr(base, "collocated_cis"))) {
          env.collocated_cis.insert(c);
        }
      }
      if (const json* hosts = r.Array(e, base, "hosting_nodes")) {
        for (auto& n : r.Strings(*hosts, Ptr(base, "hosting_nodes"))) {
          env.hosting_nodes.insert(n);
        }
      }
      model.environments.push_back(std::move(env));
    }
  }
  if (const json* placement = r.Object(doc, "", "placement", false)) {
    std::map<NodeId, std::set<CiId>> by_node;
    for (auto it = placement->begin(); it != placement->end(); ++it) {
      if (!it.value().is_array()) {
        r.Error(Ptr("/placement", it.key()), "expected an array");
        continue;
      }
      for (auto& c : r.Strings(it.value(), Ptr("/placement", it.key()))) {
        by_node[it.key()].insert(c);
      }
    }
    // Explicit environments win; derived ones only fill CIs without any.
    std::set<CiId> explicit_owners;
    for (const auto& env : model.environments) {
      explicit_owners.insert(env.owner_ci);
    }
    for (auto& env : DeriveBoundaryEnvironments(by_node)) {
      if (!explicit_owners.contains(env.owner_ci)) {
        model.environments.push_back(std::move(env));
      }
    }
  }
}

void ParseCallGraph(const json& doc, SystemModel& model,
                    std::vector<Diagnostic>& errors) {
  DocReader r(kCallGraphDoc, &errors);
  if (const json* vertices = r.Array(doc, "", "vertices")) {
    for (auto& v : r.Strings(*vertices, "/vertices")) model.graph.AddVertex(v);
  }
  if (const json* edges = r.Array(doc, "", "edges")) {
    for (size_t i = 0; i < edges->size(); ++i) {
      const std::string base = Ptr("/edges", i);
      auto source = r.String((*edges)[i], base, "source");
      auto target = r.String((*edges)[i], base, "target");
      auto tolerance = r.Number((*edges)[i], base, "tolerance_time");
      if (source && target && tolerance) {
        if (!model.graph.HasVertex(*source)) {
          r.Error(Ptr(base, "source"), "edge endpoint is not a vertex",
                  *source);
        }
        if (!model.graph.HasVertex(*target)) {
          r.Error(Ptr(base, "target"), "edge endpoint is not a vertex",
                  *target);
        }
        if (*tolerance < 0) {
          r.Error(Ptr(base, "tolerance_time"), "negative tolerance time");
        }
        model.graph.AddEdge(*source, *target, *tolerance);
      }
    }
  }
}

void ParseTestSuite(const json& doc, SystemModel& model,
                    std::vector<Diagnostic>& errors) {
  DocReader r(kTestSuiteDoc, &errors);
  if (const json* items = r.Array(doc, "", "test_suite_items")) {
    for (size_t i = 0; i < items->size(); ++i) {
      const json& t = (*items)[i];
      const std::string base = Ptr("/test_suite_items", i);
      TestSuiteItem tsi;
      tsi.id = r.String(t, base, "id").value_or("");
      if (const json* paths = r.Array(t, base, "call_paths")) {
        for (size_t p = 0; p < paths->size(); ++p) {
          const std::string pbase = Ptr(Ptr(base, "call_paths"), p);
          if (!(*paths)[p].is_array()) {
            r.Error(pbase, "expected an array of CI ids");
            continue;
          }
          tsi.call_paths.push_back({r.Strings((*paths)[p], pbase)});
        }
      }
      if (const json* cov = r.Object(t, base, "coverage")) {
        const std::string cbase = Ptr(base, "coverage");
        if (auto kind = r.String(*cov, cbase, "kind")) {
          if (auto parsed = ParseCoverageKind(*kind)) {
            tsi.coverage.kind = *parsed;
          } else {
            r.Error(Ptr(cbase, "kind"), "unknown coverage criterion", *kind);
          }
        }
        tsi.coverage.width = r.Int(*cov, cbase, "width").value_or(0);
      }
      tsi.execution_time = r.Number(t, base, "execution_time").value_or(0);
      tsi.runtime_framework =
          r.String(t, base, "runtime_framework").value_or("");
      model.suite.push_back(std::move(tsi));
    }
  }
  if (const json* pairs = r.Array(doc, "", "precedence", false)) {
    for (size_t i = 0; i < pairs->size(); ++i) {
      const std::string base = Ptr("/precedence", i);
      auto leading = r.String((*pairs)[i], base, "leading");
      auto following = r.String((*pairs)[i], base, "following");
      if (leading && following) {
        model.precedence.push_back({*leading, *following});
      }
    }
  }
}

void ParseIsolation(const json& doc, SystemModel& model,
                    std::vector<Diagnostic>& errors) {
  DocReader r(kIsolationDoc, &errors);
  const json* rows = r.Array(doc, "", "rows");
  if (rows == nullptr) return;
  for (size_t i = 0; i < rows->size(); ++i) {
    const json& row = (*rows)[i];
    const std::string base = Ptr("/rows", i);
    auto ci = r.String(row, base, "ci");
    IsolationRecord rec;
    rec.risk = r.Bool(row, base, "risk").value_or(false);
    rec.snapshot_time = r.Number(row, base, "snapshot").value_or(0);
    rec.clone_time = r.Number(row, base, "clone").value_or(0);
    rec.relocation_time = r.Number(row, base, "load_relocation").value_or(0);
    if (!ci) continue;
    if (model.isolation.contains(*ci)) {
      r.Error(base, "duplicate isolation row", *ci);
    }
    model.isolation[*ci] = rec;
  }
}

void ParseOutage(const json& doc, SystemModel& model,
                 std::vector<Diagnostic>& errors) {
  DocReader r(kOutageDoc, &errors);
  const json* budgets = r.Object(doc, "", "acceptable_outage");
  if (budgets == nullptr) return;
  for (auto it = budgets->begin(); it != budgets->end(); ++it) {
    if (!it.value().is_number()) {
      r.Error(Ptr("/acceptable_outage", it.key()), "expected a number");
      continue;
    }
    model.acceptable_outage[it.key()] = it.value().get<double>();
  }
}

void ParseFrameworks(const json& doc, SystemModel& model,
                     std::vector<Diagnostic>& errors) {
  DocReader r(kFrameworksDoc, &errors);
  const json* frameworks = r.Array(doc, "", "frameworks");
  if (frameworks == nullptr) return;
  for (size_t i = 0; i < frameworks->size(); ++i) {
    const std::string base = Ptr("/frameworks", i);
    Framework fw;
    fw.id = r.String((*frameworks)[i], base, "id").value_or("");
    if (const json* options = r.Object((*frameworks)[i], base, "options")) {
      for (auto it = options->begin(); it != options->end(); ++it) {
        const std::string obase = Ptr(Ptr(base, "options"), it.key());
        auto option = ParseDeploymentOption(it.key());
        if (!option) {
          r.Error(obase, "unknown deployment option", it.key());
          continue;
        }
        if (!it.value().is_number()) {
          r.Error(obase, "expected a number");
          continue;
        }
        fw.options[*option] = it.value().get<double>();
      }
    }
    if (model.frameworks.contains(fw.id)) {
      r.Error(base, "duplicate framework id", fw.id);
    }
    model.frameworks[fw.id] = std::move(fw);
  }
}

void ParseObjective(const json& doc, SystemModel& model,
                    std::vector<Diagnostic>& errors) {
  DocReader r(kObjectiveDoc, &errors);
  model.objective = r.String(doc, "", "objective").value_or("");
}

using Parser = void (*)(const json&, SystemModel&, std::vector<Diagnostic>&);

const std::vector<std::pair<const char*, Parser>>& Parsers() {
  static const std::vector<std::pair<const char*, Parser>> parsers = {
      {kSystemDoc, ParseSystem},         {kCallGraphDoc, ParseCallGraph},
      {kTestSuiteDoc, ParseTestSuite},   {kIsolationDoc, ParseIsolation},
      {kOutageDoc, ParseOutage},         {kFrameworksDoc, ParseFrameworks},
      {kObjectiveDoc, ParseObjective},
  };
  return parsers;
}

}  // namespace

BundleLoadResult ParseBundle(const std::map<std::string, json>& docs) {
  BundleLoadResult result;
  for (const auto& [name, parse] : Parsers()) {
    auto it = docs.find(name);
    if (it == docs.end()) {
      result.errors.push_back({name, "", "", "missing document"});
      continue;
    }
    parse(it->second, result.model, result.errors);
  }
  return result;
}

BundleLoadResult LoadBundle(const std::filesystem::path& dir) {
  std::map<std::string, json> docs;
  std::vector<Diagnostic> read_errors;
  for (const auto& [name, parse] : Parsers()) {
    std::ifstream in(dir / name);
    if (!in) continue;  // reported as a missing document by ParseBundle
    try {
      docs[name] = json::parse(in);
    } catch (const json::parse_error& e) {
      read_errors.push_back({name, "", "", std::string("malformed JSON: ") +
                                               e.what()});
      docs[name] = json::object();
    }
  }
  BundleLoadResult result = ParseBundle(docs);
  result.errors.insert(result.errors.begin(), read_errors.begin(),
                       read_errors.end());
  return result;
}

std::map<std::string, json> BundleDocuments(const SystemModel& model) {
  std::map<std::string, json> docs;

  json system;
  system["nodes"] = model.nodes;
  system["configured_instances"] = json::array();
  for (const auto& ci : model.cis) {
    json c = {{"id", ci.id},
              {"component_count", ci.component_count},
              {"node_pool", ci.node_pool},
              {"cool_down_period", ci.cool_down_period},
              {"scaling_step", ci.scaling_step},
              {"service_instances", ci.service_instances}};
    if (ci.criticality) c["criticality"] = *ci.criticality;
    system["configured_instances"].push_back(std::move(c));
  }
  system["boundary_environments"] = json::array();
  for (const auto& env : model.environments) {
    system["boundary_environments"].push_back(
        {{"id", env.id},
         {"owner_ci", env.owner_ci},
         {"collocated_cis", env.collocated_cis},
         {"hosting_nodes", env.hosting_nodes}});
  }
  docs[kSystemDoc] = std::move(system);

  json graph;
  graph["vertices"] = model.graph.vertices();
  graph["edges"] = json::array();
  for (const auto& [edge, tolerance] : model.graph.edges()) {
    graph["edges"].push_back({{"source", edge.first},
                              {"target", edge.second},
                              {"tolerance_time", tolerance}});
  }
  docs[kCallGraphDoc] = std::move(graph);

  json suite;
  suite["test_suite_items"] = json::array();
  for (const auto& tsi : model.suite) {
    json paths = json::array();
    for (const auto& p : tsi.call_paths) paths.push_back(p.vertices);
    suite["test_suite_items"].push_back(
        {{"id", tsi.id},
         {"call_paths", std::move(paths)},
         {"coverage",
          {{"kind", ToString(tsi.coverage.kind)},
           {"width", tsi.coverage.width}}},
         {"execution_time", tsi.execution_time},
         {"runtime_framework", tsi.runtime_framework}});
  }
  suite["precedence"] = json::array();
  for (const auto& pair : model.precedence) {
    suite["precedence"].push_back(
        {{"leading", pair.leading}, {"following", pair.following}});
  }
  docs[kTestSuiteDoc] = std::move(suite);

  json isolation;
  isolation["time_unit"] = "seconds";
  isolation["rows"] = json::array();
  for (const auto& [ci, rec] : model.isolation) {
    isolation["rows"].push_back({{"ci", ci},
                                 {"risk", rec.risk ? 1 : 0},
                                 {"snapshot", rec.snapshot_time},
                                 {"clone", rec.clone_time},
                                 {"load_relocation", rec.relocation_time}});
  }
  docs[kIsolationDoc] = std::move(isolation);

  docs[kOutageDoc] = {{"acceptable_outage", model.acceptable_outage}};

  json frameworks;
  frameworks["frameworks"] = json::array();
  for (const auto& [id, fw] : model.frameworks) {
    json options = json::object();
    for (const auto& [option, time] : fw.options) {
      options[ToString(option)] = time;
    }
    frameworks["frameworks"].push_back(
        {{"id", id}, {"options", std::move(options)}});
  }
  docs[kFrameworksDoc] = std::move(frameworks);

  docs[kObjectiveDoc] = {{"objective", model.objective}};
  return docs;
}

void SaveBundle(const SystemModel& model, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, doc] : BundleDocuments(model)) {
    std::ofstream out(dir / name);
    if (!out) throw PlanError("cannot write " + (dir / name).string());
    out << doc.dump(2) << "\n";
  }
}

namespace {

class Validator {
 public:
  explicit Validator(const SystemModel& model) : m_(model) {}

  std::vector<Diagnostic> Run() {
    CheckCis();
    CheckEnvironments();
    CheckGraph();
    CheckSuite();
    CheckPrecedence();
    CheckIsolation();
    CheckOutage();
    return std::move(errors_);
  }

 private:
  void Error(const char* doc, std::string pointer, std::string message,
             std::string id = "") {
    errors_.push_back({doc, std::move(pointer), std::move(id),
                       std::move(message)});
  }

  void CheckCis() {
    std::set<CiId> seen;
    std::set<SiId> sis;
    for (size_t i = 0; i < m_.cis.size(); ++i) {
      const auto& ci = m_.cis[i];
      const std::string base = Ptr("/configured_instances", i);
      if (ci.id.empty()) Error(kSystemDoc, Ptr(base, "id"), "empty CI id");
      if (!seen.insert(ci.id).second) {
        Error(kSystemDoc, Ptr(base, "id"), "duplicate CI id", ci.id);
      }
      if (ci.component_count < 1) {
        Error(kSystemDoc, Ptr(base, "component_count"),
              "component_count must be >= 1", ci.id);
      }
      if (ci.scaling_step < 1) {
        Error(kSystemDoc, Ptr(base, "scaling_step"),
              "scaling_step must be >= 1", ci.id);
      }
      if (!(ci.cool_down_period > 0)) {
        Error(kSystemDoc, Ptr(base, "cool_down_period"),
              "cool_down_period must be > 0", ci.id);
      }
      if (ci.node_pool.empty()) {
        Error(kSystemDoc, Ptr(base, "node_pool"), "empty node pool", ci.id);
      }
      if (ci.component_count > static_cast<int>(ci.node_pool.size())) {
        Error(kSystemDoc, Ptr(base, "component_count"),
              "component_count exceeds node pool size", ci.id);
      }
      for (const auto& node : ci.node_pool) {
        if (!m_.nodes.contains(node)) {
          Error(kSystemDoc, Ptr(base, "node_pool"), "unresolved node id",
                node);
        }
      }
      if (ci.criticality && *ci.criticality < 0) {
        Error(kSystemDoc, Ptr(base, "criticality"), "negative criticality",
              ci.id);
      }
      for (const auto& si : ci.service_instances) {
        if (!sis.insert(si).second) {
          Error(kSystemDoc, Ptr(base, "service_instances"),
                "SI provided by more than one CI", si);
        }
      }
    }
  }

  void CheckEnvironments() {
    std::set<std::pair<CiId, EnvId>> seen;
    for (size_t i = 0; i < m_.environments.size(); ++i) {
      const auto& env = m_.environments[i];
      const std::string base = Ptr("/boundary_environments", i);
      if (!seen.insert({env.owner_ci, env.id}).second) {
        Error(kSystemDoc, base, "duplicate boundary environment", env.id);
      }
      const ConfiguredInstance* owner = m_.FindCi(env.owner_ci);
      if (owner == nullptr) {
        Error(kSystemDoc, Ptr(base, "owner_ci"), "unresolved CI id",
              env.owner_ci);
        continue;
      }
      if (env.collocated_cis.contains(env.owner_ci)) {
        Error(kSystemDoc, Ptr(base, "collocated_cis"),
              "owner listed as collocated", env.id);
      }
      for (const auto& c : env.collocated_cis) {
        if (m_.FindCi(c) == nullptr) {
          Error(kSystemDoc, Ptr(base, "collocated_cis"), "unresolved CI id",
                c);
        }
      }
      if (env.hosting_nodes.empty()) {
        Error(kSystemDoc, Ptr(base, "hosting_nodes"), "no hosting nodes",
              env.id);
      }
      for (const auto& node : env.hosting_nodes) {
        if (!owner->node_pool.contains(node)) {
          Error(kSystemDoc, Ptr(base, "hosting_nodes"),
                "hosting node outside the owner's node pool", node);
        }
      }
    }
  }

  void CheckGraph() {
    for (const auto& v : m_.graph.vertices()) {
      if (m_.FindCi(v) == nullptr) {
        Error(kCallGraphDoc, "/vertices", "unresolved CI id", v);
      }
    }
    size_t i = 0;
    for (const auto& [edge, tolerance] : m_.graph.edges()) {
      if (tolerance < 0) {
        Error(kCallGraphDoc, Ptr("/edges", i), "negative tolerance time",
              edge.first + "->" + edge.second);
      }
      ++i;
    }
  }

  void CheckSuite() {
    std::set<TsiId> seen;
    for (size_t i = 0; i < m_.suite.size(); ++i) {
      const auto& tsi = m_.suite[i];
      const std::string base = Ptr("/test_suite_items", i);
      if (tsi.id.empty()) Error(kTestSuiteDoc, Ptr(base, "id"), "empty TSI id");
      if (!seen.insert(tsi.id).second) {
        Error(kTestSuiteDoc, Ptr(base, "id"), "duplicate TSI id", tsi.id);
      }
      if (tsi.call_paths.empty()) {
        Error(kTestSuiteDoc, Ptr(base, "call_paths"), "no call paths", tsi.id);
      }
      for (size_t p = 0; p < tsi.call_paths.size(); ++p) {
        CheckPath(tsi.call_paths[p], Ptr(Ptr(base, "call_paths"), p));
      }
      if (tsi.coverage.width < 1) {
        Error(kTestSuiteDoc, Ptr(base, "coverage/width"),
              "coverage width must be >= 1", tsi.id);
      }
      if (tsi.execution_time < 0) {
        Error(kTestSuiteDoc, Ptr(base, "execution_time"),
              "negative execution time", tsi.id);
      }
      if (!m_.frameworks.contains(tsi.runtime_framework)) {
        Error(kTestSuiteDoc, Ptr(base, "runtime_framework"),
              "unresolved framework id", tsi.runtime_framework);
      }
    }
  }

  void CheckPath(const CallPath& path, const std::string& pointer) {
    if (path.vertices.empty()) {
      Error(kTestSuiteDoc, pointer, "empty call path");
      return;
    }
    bool resolved = true;
    for (size_t v = 0; v < path.vertices.size(); ++v) {
      const CiId& ci = path.vertices[v];
      if (m_.FindCi(ci) == nullptr) {
        Error(kTestSuiteDoc, Ptr(pointer, v), "unresolved CI id", ci);
        resolved = false;
      } else if (m_.EnvironmentsOf(ci).empty()) {
        Error(kTestSuiteDoc, Ptr(pointer, v), "CI has no boundary environments",
              ci);
      }
    }
    if (resolved && !IsValidPath(path, m_.graph)) {
      Error(kTestSuiteDoc, pointer, "not a simple path of the call graph",
            path.ToString());
    }
  }

  void CheckPrecedence() {
    std::map<TsiId, std::set<TsiId>> next;
    for (size_t i = 0; i < m_.precedence.size(); ++i) {
      const auto& pair = m_.precedence[i];
      const std::string base = Ptr("/precedence", i);
      bool ok = true;
      for (const TsiId* id : {&pair.leading, &pair.following}) {
        if (m_.FindTsi(*id) == nullptr) {
          Error(kTestSuiteDoc, base, "unresolved TSI id", *id);
          ok = false;
        }
      }
      if (ok) next[pair.leading].insert(pair.following);
    }
    // Depth-first search for a cycle.
    std::map<TsiId, int> state;  // 0 unvisited, 1 on stack, 2 done
    std::function<bool(const TsiId&)> visit = [&](const TsiId& t) {
      state[t] = 1;
      for (const auto& n : next[t]) {
        if (state[n] == 1) return true;
        if (state[n] == 0 && visit(n)) return true;
      }
      state[t] = 2;
      return false;
    };
    for (const auto& [t, unused] : next) {
      if (state[t] == 0 && visit(t)) {
        Error(kTestSuiteDoc, "/precedence", "precedence cycle", t);
        break;
      }
    }
  }

  void CheckIsolation() {
    for (const auto& [ci, rec] : m_.isolation) {
      if (m_.FindCi(ci) == nullptr) {
        Error(kIsolationDoc, "/rows", "unresolved CI id", ci);
      }
      if (rec.snapshot_time < 0 || rec.clone_time < 0 ||
          rec.relocation_time < 0) {
        Error(kIsolationDoc, "/rows", "negative duration", ci);
      }
    }
    for (const auto& ci : m_.cis) {
      if (!m_.isolation.contains(ci.id)) {
        Error(kIsolationDoc, "/rows", "CI has no isolation row", ci.id);
      }
    }
  }

  void CheckOutage() {
    std::set<SiId> sis;
    for (const auto& ci : m_.cis) {
      sis.insert(ci.service_instances.begin(), ci.service_instances.end());
    }
    for (const auto& [si, budget] : m_.acceptable_outage) {
      if (!sis.contains(si)) {
        Error(kOutageDoc, Ptr("/acceptable_outage", si), "unresolved SI id",
              si);
      }
      if (budget < 0) {
        Error(kOutageDoc, Ptr("/acceptable_outage", si),
              "negative acceptable outage", si);
      }
    }
  }

  const SystemModel& m_;
  std::vector<Diagnostic> errors_;
};

}  // namespace

ValidationResult ValidateInputs(const SystemModel& raw) {
  ValidationResult result;
  result.errors = Validator(raw).Run();
  if (!result.errors.empty()) return result;
  SystemModel model = raw;
  for (auto& ci : model.cis) {
    ci.interference_risk = model.isolation.at(ci.id).risk;
  }
  result.model = std::move(model);
  return result;
}

std::vector<BoundaryEnvironment> DeriveBoundaryEnvironments(
    const std::map<NodeId, std::set<CiId>>& placement) {
  // ci -> collocation set -> nodes with exactly that collocation
  std::map<CiId, std::map<std::set<CiId>, std::set<NodeId>>> seen;
  for (const auto& [node, placed] : placement) {
    for (const CiId& ci : placed) {
      std::set<CiId> others = placed;
      others.erase(ci);
      seen[ci][others].insert(node);
    }
  }
  std::vector<BoundaryEnvironment> out;
  for (const auto& [ci, collocations] : seen) {
    int index = 0;
    for (const auto& [others, nodes] : collocations) {
      bool dominated = false;
      for (const auto& [candidate, unused] : collocations) {
        if (candidate.size() > others.size() &&
            std::includes(candidate.begin(), candidate.end(), others.begin(),
                          others.end())) {
          dominated = true;
          break;
        }
      }
      if (dominated) continue;
      // Nodes with a smaller collocation can also host the environment.
      std::set<NodeId> hosts;
      for (const auto& [subset, subset_nodes] : collocations) {
        if (std::includes(others.begin(), others.end(), subset.begin(),
                          subset.end())) {
          hosts.insert(subset_nodes.begin(), subset_nodes.end());
        }
      }
      out.push_back({ci + ".E" + std::to_string(++index), ci, others, hosts});
    }
  }
  return out;
}

}  // namespace ltp

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

// Input bundle: a directory of JSON documents (see docs/schema.md), parsed
// into a SystemModel and cross-checked by ValidateInputs.

#ifndef LTP_BUNDLE_H_
#define LTP_BUNDLE_H_

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "ltp/model.h"

namespace ltp {

inline constexpr const char* kSystemDoc = "system.json";
inline constexpr const char* kCallGraphDoc = "callgraph.json";
inline constexpr const char* kTestSuiteDoc = "testsuite.json";
inline constexpr const char* kIsolationDoc = "isolation.json";
inline constexpr const char* kOutageDoc = "outage.json";
inline constexpr const char* kFrameworksDoc = "frameworks.json";
inline constexpr const char* kObjectiveDoc = "objective.json";

struct Diagnostic {
  std::string document;
  std::string pointer;  // JSON pointer inside `document`
  std::string id;       // offending identifier, may be empty
  std::string message;

  std::string ToString() const;
};

struct BundleLoadResult {
  SystemModel model;  // unvalidated
  std::vector<Diagnostic> errors;
};

// Reads every document of the bundle. Structural problems (missing files,
// wrong JSON types) become diagnostics; cross references are not checked.
BundleLoadResult LoadBundle(const std::filesystem::path& dir);

// Same, from already-parsed documents keyed by file name.
BundleLoadResult ParseBundle(const std::map<std::string, nlohmann::json>& docs);

// Inverse of ParseBundle.
std::map<std::string, nlohmann::json> BundleDocuments(const SystemModel& model);
void SaveBundle(const SystemModel& model, const std::filesystem::path& dir);

struct ValidationResult {
  std::optional<SystemModel> model;
  std::vector<Diagnostic> errors;

  bool ok() const { return errors.empty(); }
};

// Collects every violation instead of stopping at the first one. On success
// the returned model has derived fields filled in (interference risk).
ValidationResult ValidateInputs(const SystemModel& raw);

// Boundary environments of every CI from a node -> placed CIs map: one
// environment per distinct maximal collocation set of the CI.
std::vector<BoundaryEnvironment> DeriveBoundaryEnvironments(
    const std::map<NodeId, std::set<CiId>>& placement);

}  // namespace ltp

#endif  // LTP_BUNDLE_H_

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

// End-to-end plan generation over a validated system model.

#ifndef LTP_PIPELINE_H_
#define LTP_PIPELINE_H_

#include <optional>
#include <string>

#include "ltp/method_select.h"
#include "ltp/model.h"
#include "ltp/plan.h"

namespace ltp {

struct PipelineOptions {
  std::optional<unsigned> seed;  // randomizes greedy ordering starts
};

// Coverage, merging, method selection, ordering, plan building and wrapup.
// Throws NoSafeMethodError, PrecedenceError or PlanError.
TestPlan RunPipeline(const SystemModel& model,
                     const PipelineOptions& options = {});

// Human-readable trace of the intermediate decisions.
std::string ExplainPipeline(const SystemModel& model);

// Estimated per-configuration setup time: snapshot plus clone for flip CIs,
// snapshot for rolling CIs.
Seconds PathSetupTime(const SystemModel& model, const MethodAssignment& methods);

}  // namespace ltp

#endif  // LTP_PIPELINE_H_

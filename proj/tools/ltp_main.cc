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

// ltp: generate, verify, inspect and explain live-testing plans.
//
// Exit codes: 0 success, 1 invalid input or failed verification, 2 no safe
// plan exists for the input.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ltp/bundle.h"
#include "ltp/method_select.h"
#include "ltp/oracle.h"
#include "ltp/ordering.h"
#include "ltp/pipeline.h"
#include "ltp/plan.h"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kUnsafe = 2;

std::optional<ltp::SystemModel> LoadModel(const std::string& dir) {
  ltp::BundleLoadResult loaded = ltp::LoadBundle(dir);
  if (!loaded.errors.empty()) {
    for (const auto& d : loaded.errors) std::cerr << d.ToString() << "\n";
    return std::nullopt;
  }
  ltp::ValidationResult validated = ltp::ValidateInputs(loaded.model);
  if (!validated.ok()) {
    for (const auto& d : validated.errors) std::cerr << d.ToString() << "\n";
    return std::nullopt;
  }
  return std::move(*validated.model);
}

std::optional<ltp::TestPlan> LoadPlan(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << path << ": cannot open plan\n";
    return std::nullopt;
  }
  std::stringstream text;
  text << in.rdbuf();
  try {
    return ltp::ParsePlanText(text.str());
  } catch (const ltp::PlanParseError& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return std::nullopt;
  }
}

bool WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::error_code ignored;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ignored);
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) {
    std::cerr << path.string() << ": cannot write\n";
    return false;
  }
  return true;
}

int Generate(const std::string& input, const std::string& out_path,
             std::optional<unsigned> seed) {
  auto model = LoadModel(input);
  if (!model) return kInvalid;
  ltp::TestPlan plan;
  try {
    plan = ltp::RunPipeline(*model, {seed});
  } catch (const ltp::NoSafeMethodError& e) {
    std::cerr << e.what() << "\n";
    return kUnsafe;
  } catch (const ltp::PrecedenceError& e) {
    std::cerr << e.what() << "\n";
    return kUnsafe;
  } catch (const ltp::PlanError& e) {
    std::cerr << e.what() << "\n";
    return kInvalid;
  }
  const std::filesystem::path out(out_path);
  const std::filesystem::path metrics =
      out.has_parent_path() ? out.parent_path() / "metrics.json"
                            : std::filesystem::path("metrics.json");
  if (!WriteFile(out, ltp::PlanToText(plan))) return kInvalid;
  if (!WriteFile(metrics,
                 ltp::MetricsToJson(ltp::ComputeMetrics(plan)).dump(2) +
                     "\n")) {
    return kInvalid;
  }
  return kOk;
}

int Verify(const std::string& input, const std::string& plan_path,
           const ltp::OracleCaps& caps) {
  auto model = LoadModel(input);
  if (!model) return kInvalid;
  auto plan = LoadPlan(plan_path);
  if (!plan) return kInvalid;
  try {
    const ltp::VerificationReport report = ltp::VerifyPlan(*model, *plan, caps);
    std::cout << report.ToText();
    return report.Passed() ? kOk : kInvalid;
  } catch (const ltp::PlanError& e) {
    std::cerr << e.what() << "\n";
    return kInvalid;
  }
}

int Metrics(const std::string& plan_path, const std::string& format) {
  auto plan = LoadPlan(plan_path);
  if (!plan) return kInvalid;
  try {
    const ltp::PlanMetrics metrics = ltp::ComputeMetrics(*plan);
    if (format == "json") {
      std::cout << ltp::MetricsToJson(metrics).dump(2) << "\n";
    } else {
      std::cout << ltp::MetricsToText(metrics);
    }
  } catch (const ltp::PlanError& e) {
    std::cerr << e.what() << "\n";
    return kInvalid;
  }
  return kOk;
}

int Explain(const std::string& input) {
  auto model = LoadModel(input);
  if (!model) return kInvalid;
  try {
    std::cout << ltp::ExplainPipeline(*model);
  } catch (const ltp::NoSafeMethodError& e) {
    std::cerr << e.what() << "\n";
    return kUnsafe;
  } catch (const ltp::PlanError& e) {
    std::cerr << e.what() << "\n";
    return kInvalid;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Live-testing plan generator"};
  app.require_subcommand(1);

  std::string input;
  std::string out;
  std::string plan;
  std::string format = "text";
  std::optional<unsigned> seed;
  ltp::OracleCaps caps;

  CLI::App* generate = app.add_subcommand("generate", "Generate a test plan");
  generate->add_option("--input", input, "Input bundle directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  generate->add_option("--out", out, "Output plan.json path")->required();
  generate->add_option("--seed", seed, "Seed for greedy ordering starts");

  CLI::App* verify =
      app.add_subcommand("verify", "Check a plan against the oracles");
  verify->add_option("--input", input, "Input bundle directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  verify->add_option("--plan", plan, "Plan to verify")
      ->required()
      ->check(CLI::ExistingFile);
  verify->add_option("--oracle-cap-runs", caps.runs,
                     "Largest run set for the order graph oracle");
  verify->add_option("--oracle-cap-cases", caps.cases,
                     "Largest grouping for the ordering oracle");

  CLI::App* metrics = app.add_subcommand("metrics", "Summarize plan costs");
  metrics->add_option("--plan", plan, "Plan to summarize")
      ->required()
      ->check(CLI::ExistingFile);
  metrics->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"json", "text"}));

  CLI::App* explain =
      app.add_subcommand("explain", "Trace the planning decisions");
  explain->add_option("--input", input, "Input bundle directory")
      ->required()
      ->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, std::cerr, std::cerr);
    return code == 0 ? kOk : kInvalid;
  }

  if (generate->parsed()) return Generate(input, out, seed);
  if (verify->parsed()) return Verify(input, plan, caps);
  if (metrics->parsed()) return Metrics(plan, format);
  return Explain(input);
}

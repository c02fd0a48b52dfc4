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

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "test_util.h"

namespace ltp {
namespace {

namespace fs = std::filesystem;
using ::testing::HasSubstr;

struct Result {
  int code = -1;
  std::string output;  // stdout and stderr interleaved
};

Result RunCli(const std::string& args) {
  const std::string command =
      std::string("\"") + LTP_CLI_PATH + "\" " + args + " 2>&1";
  Result result;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return result;
  std::array<char, 4096> buffer;
  size_t n;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    result.output.append(buffer.data(), n);
  }
  const int status = pclose(pipe);
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string Quote(const fs::path& p) { return "\"" + p.string() + "\""; }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ltp_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path Generate(const std::string& fixture) {
    const fs::path out = dir_ / "plan.json";
    const Result r = RunCli("generate --input " +
                         Quote(testing::FixtureDir(fixture)) + " --out " +
                         Quote(out));
    EXPECT_EQ(r.code, 0) << r.output;
    return out;
  }

  nlohmann::json ReadJson(const fs::path& p) {
    std::ifstream in(p);
    return nlohmann::json::parse(in);
  }

  void WriteJson(const fs::path& p, const nlohmann::json& doc) {
    std::ofstream(p) << doc.dump(2);
  }

  std::string Verify(const fs::path& plan, int expected_code) {
    const Result r =
        RunCli("verify --input " + Quote(testing::FixtureDir("paper_example")) +
            " --plan " + Quote(plan));
    EXPECT_EQ(r.code, expected_code) << r.output;
    return r.output;
  }

  fs::path dir_;
};

TEST_F(CliTest, GenerateWritesPlanAndMetrics) {
  const fs::path plan = Generate("paper_example");
  ASSERT_TRUE(fs::exists(plan));
  ASSERT_TRUE(fs::exists(dir_ / "metrics.json"));
  EXPECT_EQ(ReadJson(plan)["schedule"].size(), 8u);
  EXPECT_EQ(ReadJson(dir_ / "metrics.json")["test_cases"], 8);
}

TEST_F(CliTest, GenerateIsDeterministic) {
  const fs::path plan = Generate("paper_example");
  std::stringstream first;
  first << std::ifstream(plan).rdbuf();
  Generate("paper_example");
  std::stringstream second;
  second << std::ifstream(plan).rdbuf();
  EXPECT_EQ(first.str(), second.str());
}

TEST_F(CliTest, VerifyAcceptsGeneratedPlan) {
  const std::string out = Verify(Generate("paper_example"), 0);
  EXPECT_THAT(out, HasSubstr("PASS completeness"));
  EXPECT_THAT(out, HasSubstr("PASS precedence"));
}

TEST_F(CliTest, VerifyRejectsSwappedInvocations) {
  const fs::path plan = Generate("paper_example");
  nlohmann::json doc = ReadJson(plan);
  bool swapped = false;
  for (auto& tc : doc["schedule"]) {
    auto& main = tc["main"];
    if (main.size() >= 2) {
      std::reverse(main.begin(), main.end());
      swapped = true;
      break;
    }
  }
  ASSERT_TRUE(swapped);
  WriteJson(plan, doc);
  EXPECT_THAT(Verify(plan, 1), HasSubstr("FAIL precedence"));
}

TEST_F(CliTest, VerifyRejectsDuplicatedRun) {
  const fs::path plan = Generate("paper_example");
  nlohmann::json doc = ReadJson(plan);
  doc["schedule"][1]["main"].push_back(doc["schedule"][1]["main"][0]);
  WriteJson(plan, doc);
  EXPECT_THAT(Verify(plan, 1), HasSubstr("duplicate run"));
}

TEST_F(CliTest, UnsafeInputExitsTwo) {
  const Result r = RunCli("generate --input " +
                       Quote(testing::FixtureDir("unsafe_ci6")) + " --out " +
                       Quote(dir_ / "plan.json"));
  EXPECT_EQ(r.code, 2);
  EXPECT_THAT(r.output, HasSubstr("no safe method for CI 'CI6'"));
  EXPECT_FALSE(fs::exists(dir_ / "plan.json"));
}

TEST_F(CliTest, EmptySuiteGeneratesEmptySchedule) {
  const fs::path plan = Generate("empty_suite");
  EXPECT_TRUE(ReadJson(plan)["schedule"].empty());
}

TEST_F(CliTest, MetricsFormats) {
  const fs::path plan = Generate("paper_example");
  const Result json = RunCli("metrics --plan " + Quote(plan) + " --format json");
  EXPECT_EQ(json.code, 0);
  EXPECT_EQ(nlohmann::json::parse(json.output)["test_cases"], 8);
  const Result text = RunCli("metrics --plan " + Quote(plan));
  EXPECT_EQ(text.code, 0);
  EXPECT_THAT(text.output, HasSubstr("test cases: 8"));
}

TEST_F(CliTest, MalformedPlanExitsOne) {
  const fs::path plan = dir_ / "bad.json";
  std::ofstream(plan) << "{\"schedule\": [";
  const Result r = RunCli("metrics --plan " + Quote(plan));
  EXPECT_EQ(r.code, 1);
  EXPECT_THAT(r.output, HasSubstr("malformed JSON"));
}

TEST_F(CliTest, InvalidBundleExitsOne) {
  const Result r = RunCli("explain --input " + Quote(dir_ / "missing"));
  EXPECT_EQ(r.code, 1);
}

TEST_F(CliTest, ExplainPrintsGroupings) {
  const Result r =
      RunCli("explain --input " + Quote(testing::FixtureDir("paper_example")));
  EXPECT_EQ(r.code, 0);
  EXPECT_THAT(r.output, HasSubstr("groupings:"));
}

TEST_F(CliTest, MissingSubcommandIsUsageError) {
  EXPECT_NE(RunCli("").code, 0);
}

}  // namespace
}  // namespace ltp

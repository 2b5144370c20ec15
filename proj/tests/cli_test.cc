// Copyright 2026 The pdhg_diag Authors.
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

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "gtest/gtest.h"
#include "pdhg_io/json_writer.h"
#include "pdhg_io/problem_io.h"

namespace pdhg::io {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int exit_code = -1;
  std::string out;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("pdhg_cli_" +
            std::string(::testing::UnitTest::GetInstance()
                            ->current_test_info()
                            ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  static std::string Fixture(const std::string& name) {
    return std::string(PDHG_FIXTURE_DIR) + "/" + name;
  }

  CliRun Run(const std::string& args) const {
    const fs::path out = dir_ / "stdout.txt";
    const std::string cmd = std::string(PDHG_DIAG_BINARY) + " " + args +
                            " > " + out.string() + " 2> " +
                            (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    CliRun run;
    run.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    run.out = ReadFile(out.string());
    return run;
  }

  fs::path dir_;
};

TEST_F(CliTest, SolveExitCodes) {
  const CliRun lp = Run("solve --input " + Fixture("lp_example.json"));
  EXPECT_EQ(lp.exit_code, 2);
  const Json doc = Json::parse(lp.out);
  EXPECT_EQ(doc["status"], "both_infeasible");
  EXPECT_EQ(doc["certificates"].size(), 2u);

  const CliRun qp = Run("solve --input " + Fixture("qp_example.json") +
                        " --mode qp");
  EXPECT_EQ(qp.exit_code, 2);
  EXPECT_EQ(Json::parse(qp.out)["status"], "primal_infeasible");

  const CliRun ok = Run("solve --input " + Fixture("feasible_lp.json"));
  EXPECT_EQ(ok.exit_code, 0);
  EXPECT_TRUE(Json::parse(ok.out).contains("solution"));

  const CliRun conic = Run("solve --input " + Fixture("simplex_conic.json"));
  EXPECT_EQ(conic.exit_code, 0);
  EXPECT_EQ(Json::parse(conic.out)["kind"], "conic_result");
}

TEST_F(CliTest, ErrorsExitWithOne) {
  EXPECT_EQ(Run("solve --input " + Fixture("garbage.json")).exit_code, 1);
  EXPECT_EQ(Run("solve --input /nonexistent.json").exit_code, 1);
  EXPECT_EQ(Run("solve --input " + Fixture("lp_example.json") +
                " --mode conic")
                .exit_code,
            1);
  EXPECT_EQ(Run("solve --input " + Fixture("lp_example.json") +
                " --sigma 1 --tau 1")
                .exit_code,
            1);
  EXPECT_NE(Run("bogus").exit_code, 0);
}

TEST_F(CliTest, BudgetExhaustionIsInconclusive) {
  EXPECT_EQ(Run("solve --input " + Fixture("feasible_lp.json") +
                " --max-iter 3")
                .exit_code,
            3);
}

TEST_F(CliTest, SeparateExitCodes) {
  const CliRun sep = Run("separate --input " + Fixture("disjoint_disks.json"));
  EXPECT_EQ(sep.exit_code, 2);
  const Json doc = Json::parse(sep.out);
  EXPECT_EQ(doc["status"], "separator");
  EXPECT_GT(doc["w"][0].get<double>(), 0.0);

  const CliRun common =
      Run("separate --input " + Fixture("overlapping_disks.json"));
  EXPECT_EQ(common.exit_code, 0);
  EXPECT_EQ(Json::parse(common.out)["status"], "common_point");

  const CliRun self = Run("solve --mode ellipsoid --input " +
                          Fixture("self_instance.json"));
  EXPECT_EQ(self.exit_code, 0);
  const Json point = Json::parse(self.out)["point"];
  EXPECT_NEAR(point[0].get<double>(), 1.0, 1e-3 + 1e-6);
  EXPECT_NEAR(point[2].get<double>(), 3.0, 1e-3 + 1e-6);

  EXPECT_EQ(Run("separate --input " + Fixture("singular.json")).exit_code, 1);
}

TEST_F(CliTest, OutputIsDeterministic) {
  const std::string args = "solve --input " + Fixture("lp_example.json") +
                           " --out " + (dir_ / "a.json").string() +
                           " --trace " + (dir_ / "a.csv").string();
  ASSERT_EQ(Run(args).exit_code, 2);
  Json first = Json::parse(ReadFile((dir_ / "a.json").string()));
  const std::string first_csv = ReadFile((dir_ / "a.csv").string());
  ASSERT_EQ(Run(args).exit_code, 2);
  Json second = Json::parse(ReadFile((dir_ / "a.json").string()));
  first.erase("wall_time_seconds");
  second.erase("wall_time_seconds");
  EXPECT_EQ(DumpJson(first), DumpJson(second));
  EXPECT_EQ(first_csv, ReadFile((dir_ / "a.csv").string()));
  EXPECT_EQ(first_csv.substr(0, first_csv.find('\n')),
            "k,norm_dx,norm_dy,residual_m,norm_z");
}

TEST_F(CliTest, ReproduceWritesTraceAndReport) {
  const CliRun run =
      Run("reproduce lp-example --out " + (dir_ / "repro").string());
  ASSERT_EQ(run.exit_code, 0);
  const std::string csv =
      ReadFile((dir_ / "repro" / "lp-example_trace.csv").string());
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 51);
  const Json report = Json::parse(
      ReadFile((dir_ / "repro" / "lp-example_report.json").string()));
  EXPECT_EQ(report["certificates"].size(), 2u);
  EXPECT_NEAR(report["displacement"]["v_primal"][0].get<double>(), -0.15,
              1e-9);
  EXPECT_NE(Run("reproduce nothing --out " + (dir_ / "x").string()).exit_code,
            0);
}

}  // namespace
}  // namespace pdhg::io

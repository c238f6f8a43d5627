//
// Copyright 2026 The privfit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cli.hpp"

namespace privfit::cli {
namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  args.insert(args.begin(), "privfit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("privfit_cli_" + std::to_string(::testing::UnitTest::GetInstance()
                                                ->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto path = dir_ / name;
    std::ofstream(path) << text;
    return path.string();
  }

  std::filesystem::path dir_;
};

TEST_F(CliTest, MechReportsKernel) {
  const CliResult r = run({"mech", "--kind", "laplace", "--eps", "0.025", "--m", "5"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out.rfind("kind,epsilon,m,normalizer,variance,delta,dp_holds", 0), 0u);
  EXPECT_NE(r.out.find("laplace,0.025,5"), std::string::npos);
  EXPECT_NE(r.out.find("9.66033"), std::string::npos);
}

TEST_F(CliTest, MechPointMassWarns) {
  const CliResult r = run({"mech", "--kind", "laplace", "--eps", "0.1", "--m", "0"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("na"), std::string::npos);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, ValidationErrorsExitTwo) {
  EXPECT_EQ(run({"mech", "--kind", "laplace", "--eps", "-1", "--m", "5"}).code,
            kExitValidation);
  EXPECT_EQ(run({"mech", "--kind", "cauchy", "--eps", "0.1", "--m", "5"}).code,
            kExitValidation);
  EXPECT_EQ(run({"cost", "--p0", "0.5", "--p1", "0.5", "--kind", "laplace",
                 "--eps", "0.1", "--m", "5", "--nbar", "100"})
                .code,
            kExitValidation);
  EXPECT_EQ(run({"nonsense"}).code, kExitValidation);
  EXPECT_EQ(run({"test", "--table", "/nonexistent.csv", "--p0", "0.5",
                 "--kind", "laplace", "--eps", "0.1", "--m", "5"})
                .code,
            kExitValidation);
}

TEST_F(CliTest, Table1AndTable2Shapes) {
  const CliResult t1 = run({"table1"});
  ASSERT_EQ(t1.code, kExitOk) << t1.err;
  EXPECT_EQ(t1.out.rfind("epsilon,delta,m_L,m_G,scenario,loss_L,loss_G\n", 0), 0u);
  EXPECT_EQ(std::count(t1.out.begin(), t1.out.end(), '\n'), 1 + 16 * 4);
  const CliResult t2 = run({"table2"});
  ASSERT_EQ(t2.code, kExitOk);
  EXPECT_EQ(std::count(t2.out.begin(), t2.out.end(), '\n'), 1 + 16);
}

TEST_F(CliTest, Figure1Shape) {
  const CliResult r = run({"figure1", "--kind", "gaussian"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1 + 4 * 4 * 50);
}

TEST_F(CliTest, TestOnReleasedTable) {
  const std::string table = write("b.csv", "cell,value\n1,140\n2,60\n");
  const CliResult r = run({"test", "--table", table, "--p0", "0.5", "--kind",
                           "laplace", "--eps", "0.1", "--m", "5"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const nlohmann::json j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("schema"), "privfit/1");
  EXPECT_TRUE(j.at("reject").get<bool>());
  EXPECT_EQ(j.at("model"), "true");
  EXPECT_FALSE(j.at("perturbed_here").get<bool>());
}

TEST_F(CliTest, TestPerturbsRawCountsDeterministically) {
  const std::string table = write("a.csv", "cell,count\n1,30\n2,40\n3,30\n");
  const std::vector<std::string> args{"test", "--table", table, "--p0",
                                      "0.3,0.4,0.3", "--kind", "gaussian",
                                      "--eps", "0.1", "--m", "4", "--seed", "17"};
  const CliResult a = run(args);
  const CliResult b = run(args);
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_TRUE(nlohmann::json::parse(a.out).at("perturbed_here").get<bool>());
}

TEST_F(CliTest, OutputFileOption) {
  const std::string path = (dir_ / "cost.csv").string();
  const CliResult r = run({"-o", path, "cost", "--p0", "0.5", "--p1", "0.4",
                           "--kind", "laplace", "--eps", "0.025", "--m", "5",
                           "--nbar", "500"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::ifstream in(path);
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  EXPECT_NE(text.find("17090"), std::string::npos) << text;
}

TEST_F(CliTest, PowerReport) {
  const CliResult r = run({"power", "--p0", "0.5", "--p1", "0.1", "--kind",
                           "laplace", "--eps", "0.025", "--m", "5", "--n", "1000"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("8.65156"), std::string::npos) << r.out;
}

TEST_F(CliTest, SimulateFromPlan) {
  const std::string plan = write(
      "plan.json",
      R"({"trials": 2000, "seed": 3, "n": 100, "truth": [0.4], "p0": [0.5],
          "kernel": {"kind": "laplace", "epsilon": 0.1, "m": 3},
          "model": "true", "workers": 2})");
  const std::string trials = (dir_ / "trials.csv").string();
  const CliResult r = run({"simulate", "--plan", plan, "--trials-csv", trials});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const nlohmann::json j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("trials_used"), 2000);
  std::ifstream in(trials);
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2001);
}

TEST_F(CliTest, LdcheckDefaults) {
  const CliResult r = run({"ldcheck", "--dist", "bernoulli:0.5", "--xi", "0.2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1 + 4);
}

}  // namespace
}  // namespace privfit::cli

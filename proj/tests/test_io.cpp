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

#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "privfit/errors.hpp"
#include "privfit/io.hpp"

namespace privfit {
namespace {

TEST(CsvIo, FrequencyTableRoundTrip) {
  const FrequencyTable table({12, 0, 30});
  std::stringstream ss;
  write_frequency_table_csv(ss, table);
  EXPECT_EQ(ss.str(), "cell,count\n1,12\n2,0\n3,30\n");
  EXPECT_EQ(read_frequency_table_csv(ss), table);
}

TEST(CsvIo, PerturbedTableRoundTrip) {
  const PerturbedTable b({-3, 40, 63});
  std::stringstream ss;
  write_perturbed_table_csv(ss, b);
  EXPECT_EQ(read_perturbed_table_csv(ss), b);
}

TEST(CsvIo, ErrorsNameTheLine) {
  std::istringstream bad_header("cell,value\n1,3\n");
  EXPECT_THROW(read_frequency_table_csv(bad_header), ValidationError);
  std::istringstream bad_number("cell,count\n1,12\n2,x\n");
  try {
    read_frequency_table_csv(bad_number);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  std::istringstream out_of_order("cell,count\n2,12\n1,30\n");
  EXPECT_THROW(read_frequency_table_csv(out_of_order), ValidationError);
}

TEST(Round6, SignificantDigits) {
  EXPECT_DOUBLE_EQ(round6(3.14159265), 3.14159);
  EXPECT_DOUBLE_EQ(round6(123456789.0), 123457000.0);
  EXPECT_DOUBLE_EQ(round6(0.0), 0.0);
}

TEST(JsonIo, KernelRoundTrip) {
  for (const NoiseKernel& k :
       {NoiseKernel::laplace(0.025, 5), NoiseKernel::gaussian(0.2, 13),
        NoiseKernel::custom(0.1, {1.0, 3.0, 1.0})}) {
    const NoiseKernel back = kernel_from_json(kernel_to_json(k));
    EXPECT_EQ(back.kind(), k.kind());
    EXPECT_EQ(back.m(), k.m());
    EXPECT_DOUBLE_EQ(back.epsilon(), k.epsilon());
    EXPECT_TRUE(back.weights().isApprox(k.weights(), 1e-15));
  }
  EXPECT_THROW(kernel_from_json(nlohmann::json{{"kind", "laplace"}}),
               ValidationError);
}

TEST(JsonIo, PlanRoundTrip) {
  const SimPlan plan{.trials = 5000,
                     .seed = 99,
                     .n = 300,
                     .truth = SimplexPoint(Eigen::Vector2d(0.2, 0.3)),
                     .kernel = NoiseKernel::gaussian(0.1, 4),
                     .model = Model::kNaive,
                     .p0 = SimplexPoint::uniform(3),
                     .alpha = 0.01,
                     .critical_value = 7.5,
                     .critical_source = CriticalSource::kMonteCarlo,
                     .workers = 3};
  const nlohmann::json j = plan_to_json(plan);
  EXPECT_EQ(j.at("schema"), std::string(kSchema));
  const SimPlan back = plan_from_json(j);
  EXPECT_EQ(back.trials, 5000);
  EXPECT_EQ(back.seed, 99u);
  EXPECT_EQ(back.n, 300);
  EXPECT_TRUE(back.truth.probs().isApprox(plan.truth.probs()));
  EXPECT_TRUE(back.p0.probs().isApprox(plan.p0.probs()));
  EXPECT_EQ(back.model, Model::kNaive);
  EXPECT_EQ(back.critical_value, 7.5);
  EXPECT_EQ(back.critical_source, CriticalSource::kMonteCarlo);
  EXPECT_EQ(back.workers, 3);
  EXPECT_EQ(plan_to_json(back), j);
}

TEST(JsonIo, SummaryRoundTrip) {
  SimSummary s;
  s.power_hat = 0.25;
  s.stderr_hat = 0.01;
  s.ci_low = 0.23;
  s.ci_high = 0.27;
  s.rejections = 250;
  s.trials_used = 1000;
  s.critical_value = 3.84146;
  s.exponent_hat = 0.002;
  const SimSummary back = summary_from_json(summary_to_json(s));
  EXPECT_EQ(back.rejections, 250);
  EXPECT_DOUBLE_EQ(back.power_hat, 0.25);
  EXPECT_EQ(back.exponent_hat, 0.002);
  EXPECT_FALSE(back.exponent_stderr.has_value());
}

}  // namespace
}  // namespace privfit

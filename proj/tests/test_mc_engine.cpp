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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "privfit/errors.hpp"
#include "privfit/mc_engine.hpp"
#include "privfit/special_functions.hpp"

namespace privfit {
namespace {

SimplexPoint binary(double p) {
  return SimplexPoint(Eigen::VectorXd::Constant(1, p));
}

SimPlan make_plan(std::int64_t trials, double truth, Model model, Count n,
                  int workers = 1) {
  return SimPlan{.trials = trials,
                 .seed = 2026,
                 .n = n,
                 .truth = binary(truth),
                 .kernel = NoiseKernel::laplace(0.1, 3),
                 .model = model,
                 .p0 = binary(0.5),
                 .alpha = 0.05,
                 .critical_value = std::nullopt,
                 .critical_source = CriticalSource::kChi2Limit,
                 .workers = workers};
}

TEST(Seeds, ChunkSeedsDiffer) {
  EXPECT_NE(chunk_seed(1, 0), chunk_seed(1, 1));
  EXPECT_NE(chunk_seed(1, 0), chunk_seed(2, 0));
  EXPECT_EQ(splitmix64(0), 0xE220A8397B1DCDAFULL);
}

TEST(DrawMultinomial, MomentsMatch) {
  const SimplexPoint p(Eigen::Vector2d(0.2, 0.5));
  std::mt19937_64 rng(5);
  const int reps = 50000;
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  for (int r = 0; r < reps; ++r) {
    const std::vector<Count> c = draw_multinomial(40, p, rng);
    ASSERT_EQ(c[0] + c[1] + c[2], 40);
    for (int i = 0; i < 3; ++i) sum[i] += c[i];
  }
  for (int i = 0; i < 3; ++i) {
    const double mean = 40 * p[i];
    EXPECT_NEAR(sum[i] / reps, mean,
                5.0 * std::sqrt(40 * p[i] * (1 - p[i]) / reps));
  }
}

TEST(SimulateStatistics, IndependentOfWorkerCount) {
  const std::vector<double> one =
      simulate_statistics(make_plan(10000, 0.5, Model::kTrue, 80, 1));
  const std::vector<double> four =
      simulate_statistics(make_plan(10000, 0.5, Model::kTrue, 80, 4));
  ASSERT_EQ(one.size(), 10000u);
  EXPECT_EQ(one, four);
}

// Exact P(T <= t) of the plain binary LR statistic under p0 = 1/2.
double binomial_lr_cdf(Count n, double t) {
  double total = 0.0;
  for (Count a = 0; a <= n; ++a) {
    const double stat =
        2.0 * ((a > 0 ? a * std::log(a / (0.5 * n)) : 0.0) +
               (a < n ? (n - a) * std::log((n - a) / (0.5 * n)) : 0.0));
    if (stat <= t + 1e-10) {
      total += std::exp(std::lgamma(n + 1.0) - std::lgamma(a + 1.0) -
                        std::lgamma(n - a + 1.0) - n * std::log(2.0));
    }
  }
  return total;
}

TEST(SimulateNullCdf, PointMassMatchesBinomialOracle) {
  SimPlan plan = make_plan(40000, 0.5, Model::kMultinomial, 400, 4);
  plan.kernel = NoiseKernel::laplace(0.1, 0);
  const std::vector<CdfPoint> cdf = simulate_null_cdf(plan, {0.5, 1.0, 2.0, 3.84});
  for (const CdfPoint& c : cdf) {
    EXPECT_NEAR(c.cdf, binomial_lr_cdf(400, c.t), 5.0 * c.stderr_hat) << c.t;
    EXPECT_GT(c.stderr_hat, 0.0);
  }
}

TEST(EstimatePower, SizeAndWilsonInterval) {
  const SimPlan plan = make_plan(20000, 0.5, Model::kTrue, 200, 4);
  const SimSummary s = estimate_power(plan, plan_critical_value(plan));
  EXPECT_EQ(s.trials_used, 20000);
  EXPECT_NEAR(s.power_hat, 0.05, 0.015);
  EXPECT_LT(s.ci_low, s.power_hat);
  EXPECT_GT(s.ci_high, s.power_hat);
  EXPECT_NEAR(s.stderr_hat, std::sqrt(s.power_hat * (1 - s.power_hat) / 20000),
              1e-12);
}

TEST(EstimatePower, PlainPowerOracle) {
  // Point-mass kernel: the exact power is a binomial sum over the rejection set.
  SimPlan plan = make_plan(50000, 0.4, Model::kMultinomial, 100, 4);
  plan.kernel = NoiseKernel::laplace(0.1, 0);
  const double cv = chi2_quantile(0.95, 1);
  double exact = 0.0;
  for (Count a = 0; a <= 100; ++a) {
    const double t = 2.0 * ((a > 0 ? a * std::log(a / 50.0) : 0.0) +
                            (a < 100 ? (100 - a) * std::log((100 - a) / 50.0) : 0.0));
    if (t > cv) {
      exact += std::exp(std::lgamma(101.0) - std::lgamma(a + 1.0) -
                        std::lgamma(101.0 - a) + a * std::log(0.4) +
                        (100 - a) * std::log(0.6));
    }
  }
  const SimSummary s = estimate_power(plan, cv);
  EXPECT_NEAR(s.power_hat, exact, 5.0 * s.stderr_hat);
}

TEST(EstimateExponent, DeltaMethod) {
  const SimPlan plan = make_plan(20000, 0.4, Model::kTrue, 200, 4);
  const SimSummary s = estimate_exponent(plan, plan_critical_value(plan));
  ASSERT_TRUE(s.exponent_hat.has_value());
  EXPECT_NEAR(*s.exponent_hat, -std::log(1.0 - s.power_hat) / 200.0, 1e-15);
  EXPECT_NEAR(*s.exponent_stderr, s.stderr_hat / (200.0 * (1.0 - s.power_hat)),
              1e-15);
  EXPECT_LT(*s.exponent_ci_low, *s.exponent_hat);
  EXPECT_FALSE(s.saturated);
}

TEST(EstimateExponent, SaturatedLeavesExponentUnset) {
  const SimPlan plan = make_plan(2000, 0.05, Model::kTrue, 300, 2);
  const SimSummary s = estimate_exponent(plan, plan_critical_value(plan));
  EXPECT_TRUE(s.saturated);
  EXPECT_FALSE(s.exponent_hat.has_value());
}

TEST(MinSampleSize, MonotoneBoundary) {
  const SampleSizeQuery q{.plan = make_plan(4000, 0.35, Model::kTrue, 0, 4),
                          .beta_target = 0.8,
                          .n_lo = 10,
                          .n_hi = 2000};
  const SampleSizeResult r = min_sample_size(q);
  EXPECT_GE(r.at_n.ci_low, 0.8);
  EXPECT_GT(r.n, 50);
  EXPECT_LT(r.n, 400);
  SampleSizeQuery tight = q;
  tight.n_hi = 20;
  tight.n_lo = 10;
  EXPECT_THROW(min_sample_size(tight), InfeasibleError);
}

TEST(SimPlan, RejectsBadInput) {
  SimPlan plan = make_plan(0, 0.5, Model::kTrue, 100);
  EXPECT_THROW(simulate_statistics(plan), ValidationError);
  plan = make_plan(100, 0.5, Model::kTrue, 100);
  plan.p0 = SimplexPoint::uniform(3);
  EXPECT_THROW(simulate_statistics(plan), ValidationError);
}

}  // namespace
}  // namespace privfit

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

#include <gtest/gtest.h>

#include "privfit/errors.hpp"
#include "privfit/sharp_ld.hpp"

namespace privfit {
namespace {

double bernoulli_kl(double a, double p) {
  return a * std::log(a / p) + (1 - a) * std::log((1 - a) / (1 - p));
}

TEST(LatticeDistribution, ConstructorsAndCentering) {
  const LatticeDistribution b = LatticeDistribution::bernoulli(0.3);
  EXPECT_EQ(b.dim(), 1);
  EXPECT_EQ(b.size(), 2);
  EXPECT_NEAR(b.mean()[0], 0.3, 1e-15);
  EXPECT_NEAR(b.centered().mean()[0], 0.0, 1e-15);

  const LatticeDistribution m = LatticeDistribution::multinomial_indicator(
      SimplexPoint(Eigen::Vector2d(0.2, 0.5)));
  EXPECT_EQ(m.dim(), 2);
  EXPECT_EQ(m.size(), 3);
  EXPECT_TRUE(m.mean().isApprox(Eigen::Vector2d(0.2, 0.5), 1e-15));
  EXPECT_THROW(LatticeDistribution(Eigen::MatrixXd::Zero(1, 2),
                                   Eigen::Vector2d(0.7, 0.7)),
               ValidationError);
}

TEST(Cumulant, BernoulliClosedForm) {
  const LatticeDistribution b = LatticeDistribution::bernoulli(0.3);
  for (double z : {-2.0, 0.0, 0.7, 5.0}) {
    const CumulantEval c = cumulant(b, Eigen::VectorXd::Constant(1, z));
    const double tilted = 0.3 * std::exp(z) / (0.7 + 0.3 * std::exp(z));
    EXPECT_NEAR(c.value, std::log(0.7 + 0.3 * std::exp(z)), 1e-14);
    EXPECT_NEAR(c.gradient[0], tilted, 1e-14);
    EXPECT_NEAR(c.hessian(0, 0), tilted * (1 - tilted), 1e-14);
  }
}

TEST(Cumulant, NoOverflowAtLargeArgument) {
  const CumulantEval c = cumulant(LatticeDistribution::bernoulli(0.3),
                                  Eigen::VectorXd::Constant(1, 800.0));
  EXPECT_NEAR(c.value, 800.0 + std::log(0.3), 1e-9);
}

TEST(LegendreTransform, BernoulliRateIsKl) {
  const LatticeDistribution c = LatticeDistribution::bernoulli(0.5).centered();
  for (double xi : {-0.3, 0.05, 0.2, 0.45}) {
    const LegendreResult r = legendre_transform(c, Eigen::VectorXd::Constant(1, xi));
    EXPECT_NEAR(r.zhat[0], 2.0 * std::atanh(2.0 * xi), 1e-9);
    EXPECT_NEAR(r.rate, bernoulli_kl(0.5 + xi, 0.5), 1e-12);
  }
}

TEST(LegendreTransform, MultinomialRateIsKl) {
  const SimplexPoint p(Eigen::Vector2d(0.2, 0.3));
  const LatticeDistribution d = LatticeDistribution::multinomial_indicator(p);
  const Eigen::Vector2d xi(0.3, 0.25);
  const LegendreResult r = legendre_transform(d, xi);
  const double kl = 0.3 * std::log(0.3 / 0.2) + 0.25 * std::log(0.25 / 0.3) +
                    0.45 * std::log(0.45 / 0.5);
  EXPECT_NEAR(r.rate, kl, 1e-12);
  EXPECT_TRUE(cumulant(d, r.zhat).gradient.isApprox(xi, 1e-10));
}

TEST(LegendreTransform, OutsideHullIsInfeasible) {
  const LatticeDistribution c = LatticeDistribution::bernoulli(0.5).centered();
  EXPECT_THROW(legendre_transform(c, Eigen::VectorXd::Constant(1, 0.5)),
               InfeasibleError);
  EXPECT_THROW(legendre_transform(c, Eigen::VectorXd::Constant(1, 0.9)),
               InfeasibleError);
}

TEST(Regions, SupportFunctions) {
  const Eigen::VectorXd z1 = Eigen::VectorXd::Constant(1, 2.0);
  EXPECT_DOUBLE_EQ(interval_region(-1.0, 3.0)(z1), -2.0);
  EXPECT_DOUBLE_EQ(interval_region(-1.0, 3.0)(-z1), -6.0);
  const Eigen::Vector2d z(3.0, -4.0);
  EXPECT_DOUBLE_EQ(ball_region(2.0)(z), -10.0);
  EXPECT_DOUBLE_EQ(box_region(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1))(z), -4.0);
}

TEST(SharpLdEstimate, ComponentsAndCenteringRequirement) {
  const LatticeDistribution c = LatticeDistribution::bernoulli(0.5).centered();
  const Eigen::VectorXd xi = Eigen::VectorXd::Constant(1, 0.2);
  const LDEstimate e = sharp_ld_estimate(c, xi, interval_region(0.0, 1.0), 400);
  EXPECT_NEAR(e.rate, bernoulli_kl(0.7, 0.5), 1e-12);
  EXPECT_NEAR(e.boundary_term, 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(e.log_prefactor_exponent, -0.5);
  EXPECT_NEAR(e.log_estimate_up_to_constant,
              -400 * e.rate - 0.5 * std::log(400.0), 1e-9);
  EXPECT_THROW(sharp_ld_estimate(LatticeDistribution::bernoulli(0.5), xi,
                                 interval_region(0.0, 1.0), 400),
               ValidationError);
}

TEST(ExactTail, MatchesBinomialSum) {
  const LatticeDistribution b = LatticeDistribution::bernoulli(0.5);
  const std::int64_t n = 60;
  const double xi = 0.7;
  const double lo = -0.5, hi = 1.0;
  double expected = 0.0;
  for (int s = 0; s <= n; ++s) {
    if (s >= n * xi + std::sqrt(60.0) * lo - 1e-9 &&
        s <= n * xi + std::sqrt(60.0) * hi + 1e-9) {
      expected += std::exp(std::lgamma(n + 1.0) - std::lgamma(s + 1.0) -
                           std::lgamma(n - s + 1.0) - n * std::log(2.0));
    }
  }
  EXPECT_NEAR(std::exp(exact_tail_log_probability(b, xi, lo, hi, n)), expected,
              1e-13);
  EXPECT_NEAR(exact_tail_oracle(b, xi, 1.0, n),
              std::exp(exact_tail_log_probability(b, xi, -1.0, 1.0, n)), 1e-15);
}

TEST(ExactTail, CenteredAgreesWithUncentered) {
  const LatticeDistribution b = LatticeDistribution::bernoulli(0.3);
  EXPECT_NEAR(exact_tail_log_probability(b.centered(), 0.1, 0.0, 1.0, 200),
              exact_tail_log_probability(b, 0.4, 0.0, 1.0, 200), 1e-10);
}

TEST(ExactTail, EmptyWindowAndSizeLimit) {
  const LatticeDistribution b = LatticeDistribution::bernoulli(0.5);
  EXPECT_TRUE(std::isinf(exact_tail_log_probability(b, 2.0, 0.0, 0.1, 50)));
  EXPECT_THROW(exact_tail_log_probability(b, 0.6, 0.0, 1.0, 5000), SizeError);
}

}  // namespace
}  // namespace privfit

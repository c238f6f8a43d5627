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

// Kullback-Leibler geometry of multinomial hypotheses and the power-loss
// quantities of the private LR test: the loss functional
//   loss(eps, m) = log E[exp(L . grad D_KL(p0 || p1))] = sum_i log_mgf(z_i),
// the large-scale count nu, the two-regime bounds on the loss, the
// predicted power exponent and the sample cost.

#ifndef PRIVFIT_DIVERGENCE_POWER_HPP_
#define PRIVFIT_DIVERGENCE_POWER_HPP_

#include <cstdint>
#include <string_view>

#include <Eigen/Core>

#include "privfit/noise_mechanisms.hpp"
#include "privfit/types.hpp"

namespace privfit {

// Null and alternative on the same number of cells, at least 1e-12 apart in
// the infinity norm.
class HypothesisPair {
 public:
  HypothesisPair(SimplexPoint p0, SimplexPoint p1);

  const SimplexPoint& p0() const { return p0_; }
  const SimplexPoint& p1() const { return p1_; }
  int k() const { return p0_.k(); }

 private:
  SimplexPoint p0_;
  SimplexPoint p1_;
};

enum class GradientConvention {
  // d/dp0_i of D_KL with p0_k = 1 - |p0|: log(p0_i/p1_i) - log(p0_k/p1_k).
  kFreeCoordinates,
  // Per-cell partials over all k cells: log(p0_i/p1_i) + 1.
  kAllCells,
};

// sum over all k cells of p0_i log(p0_i / p1_i).
double kl_multinomial(const SimplexPoint& p0, const SimplexPoint& p1);
double kl_multinomial(const HypothesisPair& pair);

Eigen::VectorXd kl_gradient(
    const SimplexPoint& p0, const SimplexPoint& p1,
    GradientConvention convention = GradientConvention::kFreeCoordinates);
Eigen::VectorXd kl_gradient(
    const HypothesisPair& pair,
    GradientConvention convention = GradientConvention::kFreeCoordinates);

// Coordinates of the gradient with |.| >= eps (1 + eta).
int large_scale_count(
    const HypothesisPair& pair, double epsilon, double eta,
    GradientConvention convention = GradientConvention::kFreeCoordinates);

struct PowerLossReport {
  double kl = 0.0;
  Eigen::VectorXd kl_gradient;
  double loss = 0.0;
  Eigen::VectorXd per_coordinate_logmgf;
  double eta = 0.0;
  int nu = 0;
};

PowerLossReport power_loss(const HypothesisPair& pair,
                           const NoiseKernel& kernel, double eta = 0.1);

enum class LossRegime { kLargeScale, kSmallScale };
std::string_view to_string(LossRegime regime);

struct LossBounds {
  LossRegime regime = LossRegime::kLargeScale;
  int nu = 0;
  double loss = 0.0;
  // large scale: nu * log_mgf(eps (1 + eta)), a lower bound on the loss.
  // small scale: k eps^2 (1 + eta)^2 Var[L] / 2 (proof-form bound).
  double bound = 0.0;
  // sum_i Var[L] z_i^2 / 2, the quadratic approximation of the loss.
  double quadratic_loss = 0.0;
  // eps^2 (1 + eta)^2 Var[L] < 1.
  bool small_scale_hypothesis = false;
};

// Chooses the regime from nu (nu > 0 is large scale). Throws RegimeError when
// the small-scale regime applies or is requested but its hypothesis fails.
LossBounds proposition_bounds(const HypothesisPair& pair,
                              const NoiseKernel& kernel, double eta,
                              bool require_small_scale = false);

struct PowerExponentPrediction {
  // D_KL + (k/4) log(n)/n - loss/n. Terms of order n^{-1/2} and n^{-1} with
  // unpublished coefficients are omitted, so the value carries an O(n^{-1/2})
  // unmodeled band.
  double value = 0.0;
  double kl = 0.0;
  double log_term = 0.0;
  double loss_term = 0.0;
  double alpha = 0.0;
  bool omits_higher_order_terms = true;
};

PowerExponentPrediction predicted_power_exponent(const HypothesisPair& pair,
                                                 const NoiseKernel& kernel,
                                                 std::int64_t n, double alpha);

struct SampleCostReport {
  std::int64_t nbar_plain = 0;
  std::int64_t nbar_private_estimate = 0;
  double cost = 0.0;  // nbar_plain * loss / kl, unrounded
  double loss = 0.0;
  double kl = 0.0;
};

SampleCostReport sample_cost(const HypothesisPair& pair,
                             const NoiseKernel& kernel,
                             std::int64_t nbar_plain);

// Smallest eps >= 0 whose loss for a kernel of the given kind and radius does
// not exceed target_loss (the loss decreases in eps). Throws InfeasibleError
// when the loss at eps_max still exceeds the target.
double epsilon_for_loss(const HypothesisPair& pair, KernelKind kind, int m,
                        double target_loss, double eps_max = 50.0);

}  // namespace privfit

#endif  // PRIVFIT_DIVERGENCE_POWER_HPP_

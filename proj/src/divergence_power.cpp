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

#include "privfit/divergence_power.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "privfit/errors.hpp"

namespace privfit {
namespace {

void check_same_k(const SimplexPoint& p0, const SimplexPoint& p1) {
  if (p0.k() != p1.k()) {
    throw ValidationError("p0 and p1 must have the same number of cells");
  }
}

}  // namespace

HypothesisPair::HypothesisPair(SimplexPoint p0, SimplexPoint p1)
    : p0_(std::move(p0)), p1_(std::move(p1)) {
  check_same_k(p0_, p1_);
  const double gap = (p0_.full() - p1_.full()).cwiseAbs().maxCoeff();
  if (!(gap > 1e-12)) {
    throw ValidationError("p0 and p1 must differ (infinity-norm gap > 1e-12)");
  }
}

double kl_multinomial(const SimplexPoint& p0, const SimplexPoint& p1) {
  check_same_k(p0, p1);
  const Eigen::ArrayXd a = p0.full().array();
  const Eigen::ArrayXd b = p1.full().array();
  return std::max(0.0, (a * (a / b).log()).sum());
}

double kl_multinomial(const HypothesisPair& pair) {
  return kl_multinomial(pair.p0(), pair.p1());
}

Eigen::VectorXd kl_gradient(const SimplexPoint& p0, const SimplexPoint& p1,
                            GradientConvention convention) {
  check_same_k(p0, p1);
  const Eigen::ArrayXd log_ratio =
      (p0.full().array() / p1.full().array()).log();
  const Eigen::Index k = log_ratio.size();
  if (convention == GradientConvention::kAllCells) {
    return (log_ratio + 1.0).matrix();
  }
  return (log_ratio.head(k - 1) - log_ratio[k - 1]).matrix();
}

Eigen::VectorXd kl_gradient(const HypothesisPair& pair,
                            GradientConvention convention) {
  return kl_gradient(pair.p0(), pair.p1(), convention);
}

int large_scale_count(const HypothesisPair& pair, double epsilon, double eta,
                      GradientConvention convention) {
  if (!(eta > 0.0)) throw ValidationError("eta must be > 0");
  const double threshold = epsilon * (1.0 + eta);
  const Eigen::VectorXd g = kl_gradient(pair, convention);
  return static_cast<int>((g.array().abs() >= threshold).count());
}

PowerLossReport power_loss(const HypothesisPair& pair,
                           const NoiseKernel& kernel, double eta) {
  PowerLossReport r;
  r.kl = kl_multinomial(pair);
  r.kl_gradient = kl_gradient(pair);
  r.per_coordinate_logmgf = r.kl_gradient.unaryExpr(
      [&](double z) { return kernel_log_mgf(kernel, z); });
  r.loss = r.per_coordinate_logmgf.sum();
  r.eta = eta;
  r.nu = large_scale_count(pair, kernel.epsilon(), eta);
  return r;
}

std::string_view to_string(LossRegime regime) {
  return regime == LossRegime::kLargeScale ? "large_scale" : "small_scale";
}

LossBounds proposition_bounds(const HypothesisPair& pair,
                              const NoiseKernel& kernel, double eta,
                              bool require_small_scale) {
  const PowerLossReport report = power_loss(pair, kernel, eta);
  const double var = kernel_variance(kernel);
  const double scale = kernel.epsilon() * (1.0 + eta);

  LossBounds out;
  out.nu = report.nu;
  out.loss = report.loss;
  out.quadratic_loss = 0.5 * var * report.kl_gradient.squaredNorm();
  out.small_scale_hypothesis = scale * scale * var < 1.0;
  out.regime = (report.nu > 0 && !require_small_scale)
                   ? LossRegime::kLargeScale
                   : LossRegime::kSmallScale;
  if (out.regime == LossRegime::kLargeScale) {
    out.bound = report.nu * kernel_log_mgf(kernel, scale);
    return out;
  }
  if (!out.small_scale_hypothesis) {
    throw RegimeError(
        "small-scale bound requires eps^2 (1+eta)^2 Var[L] < 1, got " +
        std::to_string(scale * scale * var));
  }
  out.bound = 0.5 * pair.k() * scale * scale * var;
  return out;
}

PowerExponentPrediction predicted_power_exponent(const HypothesisPair& pair,
                                                 const NoiseKernel& kernel,
                                                 std::int64_t n, double alpha) {
  if (n < 2) throw ValidationError("predicted exponent requires n >= 2");
  const double nd = static_cast<double>(n);
  PowerExponentPrediction p;
  p.kl = kl_multinomial(pair);
  p.log_term = 0.25 * pair.k() * std::log(nd) / nd;
  p.loss_term = -power_loss(pair, kernel).loss / nd;
  p.value = p.kl + p.log_term + p.loss_term;
  p.alpha = alpha;
  return p;
}

SampleCostReport sample_cost(const HypothesisPair& pair,
                             const NoiseKernel& kernel,
                             std::int64_t nbar_plain) {
  if (nbar_plain < 1) throw ValidationError("nbar must be >= 1");
  SampleCostReport r;
  r.nbar_plain = nbar_plain;
  r.loss = power_loss(pair, kernel).loss;
  r.kl = kl_multinomial(pair);
  r.cost = static_cast<double>(nbar_plain) * r.loss / r.kl;
  r.nbar_private_estimate =
      nbar_plain + static_cast<std::int64_t>(std::ceil(r.cost));
  return r;
}

double epsilon_for_loss(const HypothesisPair& pair, KernelKind kind, int m,
                        double target_loss, double eps_max) {
  if (kind == KernelKind::kCustom) {
    throw ValidationError("epsilon_for_loss needs a laplace or gaussian kernel");
  }
  auto loss_at = [&](double eps) {
    return power_loss(pair, make_kernel(kind, eps, m)).loss;
  };
  if (loss_at(0.0) <= target_loss) return 0.0;
  if (loss_at(eps_max) > target_loss) {
    throw InfeasibleError("loss target not reachable with eps <= " +
                          std::to_string(eps_max));
  }
  double lo = 0.0;
  double hi = eps_max;
  for (int iter = 0; iter < 200 && hi - lo > 1e-13 * std::max(1.0, hi);
       ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (loss_at(mid) > target_loss) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace privfit

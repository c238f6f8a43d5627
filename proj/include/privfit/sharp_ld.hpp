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

// Exponential-family tools for sums of i.i.d. lattice vectors: the cumulant
// L(z) = log E[exp(z . X)], its Legendre transform, the sharp
// large-deviation estimate of Pr[n^{-1/2} sum X in sqrt(n) xi + E] and an
// exact convolution oracle for d = 1.

#ifndef PRIVFIT_SHARP_LD_HPP_
#define PRIVFIT_SHARP_LD_HPP_

#include <cstdint>
#include <functional>

#include <Eigen/Core>

#include "privfit/types.hpp"

namespace privfit {

// Finite distribution on R^d. Column j of points() is atom j.
class LatticeDistribution {
 public:
  LatticeDistribution(Eigen::MatrixXd points, Eigen::VectorXd probs);

  // d = 1 atoms {0, 1} with Pr[1] = p.
  static LatticeDistribution bernoulli(double p);
  // d = k-1 atoms e_i with probability p_i and 0 with probability p_k.
  static LatticeDistribution multinomial_indicator(const SimplexPoint& p);

  // Same law shifted to mean zero.
  LatticeDistribution centered() const;

  int dim() const { return static_cast<int>(points_.rows()); }
  int size() const { return static_cast<int>(points_.cols()); }
  const Eigen::MatrixXd& points() const { return points_; }
  const Eigen::VectorXd& probs() const { return probs_; }
  Eigen::VectorXd mean() const { return points_ * probs_; }

 private:
  Eigen::MatrixXd points_;
  Eigen::VectorXd probs_;
};

struct CumulantEval {
  double value = 0.0;
  Eigen::VectorXd gradient;  // tilted mean
  Eigen::MatrixXd hessian;   // tilted covariance
};

CumulantEval cumulant(const LatticeDistribution& dist, const Eigen::VectorXd& z);

struct LegendreResult {
  Eigen::VectorXd zhat;
  double rate = 0.0;  // zhat . xi - L(zhat)
  int iterations = 0;
};

// Solves grad L(zhat) = xi by damped Newton from zhat = 0. Throws
// InfeasibleError when xi is not strictly inside the convex hull of the
// support and OptimizerError when Newton stalls.
LegendreResult legendre_transform(const LatticeDistribution& dist,
                                  const Eigen::VectorXd& xi);

// Returns min over the region E of z . v.
using RegionSupportFn = std::function<double(const Eigen::VectorXd&)>;

// E = [lo, hi] in d = 1.
RegionSupportFn interval_region(double lo, double hi);
// E = box with corners lo, hi.
RegionSupportFn box_region(Eigen::VectorXd lo, Eigen::VectorXd hi);
// E = closed ball of the given radius centered at 0.
RegionSupportFn ball_region(double radius);

struct LDEstimate {
  Eigen::VectorXd zhat;
  double rate = 0.0;
  double boundary_term = 0.0;  // min over E of zhat . v
  double log_prefactor_exponent = 0.0;  // -(d+1)/4
  // -n rate - sqrt(n) boundary_term - ((d+1)/4) log n. The additive constant
  // of the log probability is not modeled.
  double log_estimate_up_to_constant = 0.0;
};

// Requires a centered distribution (|mean| <= 1e-12).
LDEstimate sharp_ld_estimate(const LatticeDistribution& dist,
                             const Eigen::VectorXd& xi,
                             const RegionSupportFn& region, std::int64_t n);

// log Pr[sum_{i<=n} X_i in [n xi + sqrt(n) lo, n xi + sqrt(n) hi]] for d = 1,
// by exact n-fold convolution of the atom law on its lattice. Requires
// n <= 2000; returns -inf for an empty window.
double exact_tail_log_probability(const LatticeDistribution& dist, double xi,
                                  double lo, double hi, std::int64_t n);

// Probability form with the symmetric window [-halfwidth, halfwidth].
double exact_tail_oracle(const LatticeDistribution& dist, double xi,
                         double halfwidth, std::int64_t n);

}  // namespace privfit

#endif  // PRIVFIT_SHARP_LD_HPP_

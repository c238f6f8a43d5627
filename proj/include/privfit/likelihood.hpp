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

// Multinomial, "true" (multinomial convolved with the noise kernel) and
// "naive" (multinomial on post-processed counts) likelihoods, with their
// maximum-likelihood estimators.
//
// The true likelihood of a released table b is
//   L(p; b) = sum_l prod_i Pr[L = l_i] * Mult(b - l; n, p),
// over l in {-m..m}^{k-1}, where b - l denotes (b_1 - l_1, ..., b_{k-1} -
// l_{k-1}, n - sum_i (b_i - l_i)). Terms whose table leaves the multinomial
// support contribute zero.

#ifndef PRIVFIT_LIKELIHOOD_HPP_
#define PRIVFIT_LIKELIHOOD_HPP_

#include <cstdint>
#include <span>

#include <Eigen/Core>

#include "privfit/noise_mechanisms.hpp"
#include "privfit/types.hpp"

namespace privfit {

// Largest lattice (2m+1)^{k-1} evaluated exactly.
inline constexpr std::int64_t kMaxLatticeSize = 10'000'000;

// log Mult(a; n, p). Requires all k counts >= 0.
double multinomial_log_pmf(const SimplexPoint& p, const FrequencyTable& a);
// Same for a raw count vector of length k; negative entries (a outside the
// support) raise DomainError.
double multinomial_log_pmf(const SimplexPoint& p, std::span<const Count> a);

// sup over the closed simplex of log Mult(a; n, q), attained at q = a/n with
// 0 log 0 = 0. Requires all counts >= 0 and a positive total.
double multinomial_max_log_likelihood(std::span<const Count> a);

// Log-likelihood value with an explicit flag for an empty support, in which
// case value is -inf.
struct LogLikelihood {
  double value = 0.0;
  bool impossible = false;
};

LogLikelihood true_log_likelihood(const SimplexPoint& p,
                                  const PerturbedTable& b,
                                  const NoiseKernel& kernel);

// Value, gradient and Hessian with respect to the k-1 free coordinates.
struct LikelihoodDerivatives {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
  bool impossible = false;
};

LikelihoodDerivatives true_log_likelihood_derivatives(
    const SimplexPoint& p, const PerturbedTable& b, const NoiseKernel& kernel);

// Number of noise vectors in the clipped lattice for b; zero means the
// likelihood vanishes identically.
std::int64_t support_term_count(const PerturbedTable& b,
                                const NoiseKernel& kernel);

// Multiplicative correction H in L(p; b) = Mult(b; n, p) * H(p; b), computed
// from the falling/rising factorial ratios
//   rho(n, b, l) = prod_i b_i! / (b_i - l_i)! * (n - |b|)! / (n - |b| + |l|)!
// so that H = sum_l prod_i Pr[L = l_i] * rho * prod_i (p_i / p_k)^{-l_i}.
// Requires b itself to lie in the multinomial support.
double h_factor(const SimplexPoint& p, const PerturbedTable& b,
                const NoiseKernel& kernel);

// Multinomial log-likelihood on b+ with total n+.
double naive_log_likelihood(const SimplexPoint& p,
                            const PostProcessedTable& bplus);

// b+ / n+ clamped into the interior with margin 1/(2 n+ + k).
SimplexPoint mle_naive(const PostProcessedTable& bplus);

struct MleOptions {
  // Stopping threshold on the per-observation gradient infinity-norm.
  double tol = 1e-10;
  int max_iterations = 100;
};

// Maximizer of the true likelihood over {p_j >= 1/(2n+k) for all k cells}.
// Damped Newton with an active set for cells pinned at the margin, started
// from the clamped empirical point b/n. Throws DegenerateDataError when the
// support is empty and OptimizerError on non-convergence.
SimplexPoint mle_true(const PerturbedTable& b, const NoiseKernel& kernel,
                      const MleOptions& options = {});

// Multinomial Fisher information on the free coordinates:
// diag(1/p_i) + 1/p_k.
Eigen::MatrixXd fisher_information(const SimplexPoint& p);

// Covariance of one multinomial draw: diag(p) - p p^T on free coordinates.
Eigen::MatrixXd covariance_matrix(const SimplexPoint& p);

}  // namespace privfit

#endif  // PRIVFIT_LIKELIHOOD_HPP_

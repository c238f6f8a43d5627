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

// Likelihood-ratio goodness-of-fit tests of H0: p = p0 under the true,
// naive and plain multinomial models, their reference distributions and
// critical values.
//
// LR statistics are 2 (sup_q log L(q) - log L(p0)). For the multinomial and
// naive models the supremum is taken over the closed simplex (0 log 0 = 0);
// for the true model it is the value at mle_true. Values in [-1e-9, 0) are
// clamped to 0; anything more negative raises ConsistencyError.

#ifndef PRIVFIT_GOF_TESTS_HPP_
#define PRIVFIT_GOF_TESTS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "privfit/likelihood.hpp"
#include "privfit/noise_mechanisms.hpp"
#include "privfit/types.hpp"

namespace privfit {

enum class Model { kTrue, kNaive, kMultinomial };
enum class CriticalSource {
  kChi2Limit,
  kEdgeworthNaive,
  kMonteCarlo,
  kExactEnumeration
};

std::string_view to_string(Model model);
Model model_from_string(std::string_view name);
std::string_view to_string(CriticalSource source);
CriticalSource critical_source_from_string(std::string_view name);

struct TestConfig {
  double alpha = 0.05;
  Model model = Model::kTrue;
  CriticalSource source = CriticalSource::kChi2Limit;
  std::int64_t mc_budget = 20000;
  // Run the naive statistic on the raw perturbed table instead of b+.
  bool naive_on_raw = false;
};

struct TestOutcome {
  double statistic = 0.0;
  double critical_value = 0.0;
  bool reject = false;
  int df = 0;
  Model model = Model::kTrue;
  CriticalSource source = CriticalSource::kChi2Limit;
  SimplexPoint mle;
  // Exact or Monte Carlo size of the test when known.
  std::optional<double> achieved_level;
  bool naive_on_raw = false;
};

// Plain multinomial LR on nonnegative counts.
double lr_statistic_multinomial(std::span<const Count> counts,
                                const SimplexPoint& p0);

double lr_statistic_true(const PerturbedTable& b, const NoiseKernel& kernel,
                         const SimplexPoint& p0,
                         const MleOptions& options = {});

// Naive LR on post-processed data (the default pipeline).
double lr_statistic_naive(const PostProcessedTable& bplus,
                          const SimplexPoint& p0);
// Naive LR on a raw perturbed table; requires every cell >= 0.
double lr_statistic_naive(const PerturbedTable& b, const SimplexPoint& p0);

// Explicit first-order penalty of the naive statistic's null CDF:
//   (1/2)^{(k+1)/2} e^{-t/2} t^{(k-1)/2} / Gamma((k+1)/2) * Var[L] tr(I(p0)) / n,
// which for k = 2 equals (t e^{-t} / 2 pi)^{1/2} Var[L] / (n p0 (1 - p0)).
double edgeworth_naive_penalty(double t, std::int64_t n, const SimplexPoint& p0,
                               const NoiseKernel& kernel);

// chi2_cdf(t, k-1) minus the penalty, clamped to [0, 1]. Higher-order terms
// with unpublished coefficients are not included.
double edgeworth_naive_cdf(double t, std::int64_t n, const SimplexPoint& p0,
                           const NoiseKernel& kernel);

// Exact null law of a statistic as (value, probability) atoms sorted by value.
struct NullDistribution {
  std::vector<std::pair<double, double>> atoms;
  double cdf(double t) const;
  double upper_tail(double t) const { return 1.0 - cdf(t); }
};

// Enumerates every table a ~ Mult(n, p0) and every noise vector, aggregating
// by released table before evaluating the statistic. Requires k <= 3,
// n <= 40 and at most 1e7 (table, noise) outcomes.
NullDistribution exact_null_distribution(const SimplexPoint& p0,
                                         std::int64_t n,
                                         const NoiseKernel& kernel,
                                         Model model);

double exact_null_cdf(double t, const SimplexPoint& p0, std::int64_t n,
                      const NoiseKernel& kernel, Model model);

struct CriticalValue {
  double value = 0.0;
  std::optional<double> achieved_level;
};

CriticalValue calibrated_critical_value(double alpha, const SimplexPoint& p0,
                                        std::int64_t n,
                                        const NoiseKernel& kernel, Model model,
                                        CriticalSource source,
                                        std::int64_t mc_budget,
                                        std::uint64_t seed);

// Runs the test on released data. For the naive model the table is
// post-processed first unless config.naive_on_raw is set.
TestOutcome run_test(const PerturbedTable& b, const NoiseKernel& kernel,
                     const SimplexPoint& p0, const TestConfig& config,
                     std::uint64_t seed);
// Post-processed input; only the naive model is consistent with it.
TestOutcome run_test(const PostProcessedTable& bplus,
                     const NoiseKernel& kernel, const SimplexPoint& p0,
                     const TestConfig& config, std::uint64_t seed);

}  // namespace privfit

#endif  // PRIVFIT_GOF_TESTS_HPP_

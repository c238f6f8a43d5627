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

// Seeded Monte Carlo estimation of null distributions, power, power
// exponents and minimal sample sizes.
//
// Trials are split into fixed chunks of kChunkTrials. Chunk c draws from a
// std::mt19937_64 seeded with splitmix64(seed + (c + 1) * 0x9E3779B97F4A7C15),
// so merged results depend only on the plan, never on the worker count.

#ifndef PRIVFIT_MC_ENGINE_HPP_
#define PRIVFIT_MC_ENGINE_HPP_

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "privfit/gof_tests.hpp"
#include "privfit/noise_mechanisms.hpp"
#include "privfit/types.hpp"

namespace privfit {

inline constexpr std::int64_t kChunkTrials = 4096;

struct SimPlan {
  std::int64_t trials = 1;
  std::uint64_t seed = 0;
  Count n = 0;
  SimplexPoint truth;  // data-generating p
  NoiseKernel kernel;
  Model model = Model::kTrue;
  SimplexPoint p0;
  double alpha = 0.05;
  // Critical value; when absent it is derived from critical_source.
  std::optional<double> critical_value;
  CriticalSource critical_source = CriticalSource::kChi2Limit;
  int workers = 1;
};

struct SimSummary {
  double power_hat = 0.0;
  double stderr_hat = 0.0;
  double ci_low = 0.0;  // Wilson 95%
  double ci_high = 0.0;
  std::int64_t rejections = 0;
  std::int64_t trials_used = 0;
  double critical_value = 0.0;
  // -(1/n) log(1 - power_hat) with a delta-method 95% interval. Unset when
  // power_hat == 1 (saturated).
  std::optional<double> exponent_hat;
  std::optional<double> exponent_stderr;
  std::optional<double> exponent_ci_low;
  std::optional<double> exponent_ci_high;
  bool saturated = false;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t chunk_seed(std::uint64_t seed, std::int64_t chunk);

// One Mult(n, p) draw via conditional binomials.
template <typename Urbg>
std::vector<Count> draw_multinomial(Count n, const SimplexPoint& p, Urbg& rng) {
  const int k = p.k();
  std::vector<Count> counts(k, 0);
  Count remaining = n;
  double mass = 1.0;
  for (int i = 0; i + 1 < k && remaining > 0; ++i) {
    const double pi = p[i];
    const double cond = std::min(1.0, std::max(0.0, pi / mass));
    std::binomial_distribution<Count> binom(remaining, cond);
    counts[i] = binom(rng);
    remaining -= counts[i];
    mass -= pi;
  }
  counts[k - 1] = remaining;
  return counts;
}

// Per-trial statistics in trial order.
std::vector<double> simulate_statistics(const SimPlan& plan);

struct CdfPoint {
  double t = 0.0;
  double cdf = 0.0;
  double stderr_hat = 0.0;
};

// Empirical CDF of the statistic at each grid point; plan.truth should equal
// plan.p0.
std::vector<CdfPoint> simulate_null_cdf(const SimPlan& plan,
                                        const std::vector<double>& t_grid);

// Critical value used by a plan: explicit value or the configured source.
double plan_critical_value(const SimPlan& plan);

SimSummary estimate_power(const SimPlan& plan, double critical_value);
SimSummary estimate_exponent(const SimPlan& plan, double critical_value);

struct SampleSizeQuery {
  SimPlan plan;  // plan.n is ignored
  double beta_target = 0.8;
  Count n_lo = 10;
  Count n_hi = 100000;
};

struct SampleSizeResult {
  Count n = 0;
  SimSummary at_n;
  int evaluations = 0;
};

// Smallest n in [n_lo, n_hi] whose Wilson lower bound on power reaches
// beta_target, by bisection with the plan's trial budget at every n. Throws
// InfeasibleError if n_hi does not qualify.
SampleSizeResult min_sample_size(const SampleSizeQuery& query);

}  // namespace privfit

#endif  // PRIVFIT_MC_ENGINE_HPP_

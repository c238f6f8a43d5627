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

#include "privfit/mc_engine.hpp"

#include <cmath>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <unordered_map>

#include "privfit/errors.hpp"

namespace privfit {
namespace {

constexpr double kZ95 = 1.959963984540054;

struct CountsHash {
  std::size_t operator()(const std::vector<Count>& v) const {
    std::uint64_t h = 0x9E3779B97F4A7C15ULL;
    for (Count c : v) h = splitmix64(h ^ static_cast<std::uint64_t>(c));
    return static_cast<std::size_t>(h);
  }
};

using StatisticCache = std::unordered_map<std::vector<Count>, double, CountsHash>;

void validate_plan(const SimPlan& plan) {
  if (plan.trials < 1) throw ValidationError("trials must be >= 1");
  if (plan.n < 1) throw ValidationError("sample size n must be >= 1");
  if (plan.truth.k() != plan.p0.k()) {
    throw ValidationError("truth and p0 must have the same number of cells");
  }
  if (!(plan.alpha > 0.0 && plan.alpha < 1.0)) {
    throw ValidationError("alpha must be in (0, 1)");
  }
}

double cached(StatisticCache& cache, const std::vector<Count>& key,
              const std::function<double()>& compute) {
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const double value = compute();
  cache.emplace(key, value);
  return value;
}

void run_chunk(const SimPlan& plan, const NoiseSampler& sampler,
               std::int64_t chunk, StatisticCache& cache, double* out) {
  std::mt19937_64 rng(chunk_seed(plan.seed, chunk));
  const std::int64_t begin = chunk * kChunkTrials;
  const std::int64_t end = std::min(plan.trials, begin + kChunkTrials);
  for (std::int64_t t = begin; t < end; ++t) {
    const std::vector<Count> a = draw_multinomial(plan.n, plan.truth, rng);
    double stat = 0.0;
    switch (plan.model) {
      case Model::kMultinomial:
        stat = cached(cache, a,
                      [&] { return lr_statistic_multinomial(a, plan.p0); });
        break;
      case Model::kTrue: {
        const PerturbedTable b =
            perturb(std::span<const Count>(a), sampler, rng);
        stat = cached(cache, b.values(), [&] {
          return lr_statistic_true(b, plan.kernel, plan.p0);
        });
        break;
      }
      case Model::kNaive: {
        const PerturbedTable b =
            perturb(std::span<const Count>(a), sampler, rng);
        const PostProcessedTable bplus = post_process_nonnegative(b);
        stat = cached(cache, bplus.values(),
                      [&] { return lr_statistic_naive(bplus, plan.p0); });
        break;
      }
    }
    out[t] = stat;
  }
}

void wilson(std::int64_t successes, std::int64_t trials, double& low,
            double& high) {
  const double nt = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / nt;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / nt;
  const double center = (p + z2 / (2.0 * nt)) / denom;
  const double half =
      kZ95 / denom * std::sqrt(p * (1.0 - p) / nt + z2 / (4.0 * nt * nt));
  low = std::max(0.0, center - half);
  high = std::min(1.0, center + half);
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t chunk_seed(std::uint64_t seed, std::int64_t chunk) {
  return splitmix64(seed + static_cast<std::uint64_t>(chunk + 1) *
                               0x9E3779B97F4A7C15ULL);
}

std::vector<double> simulate_statistics(const SimPlan& plan) {
  validate_plan(plan);
  const NoiseSampler sampler(plan.kernel);
  const std::int64_t chunks = (plan.trials + kChunkTrials - 1) / kChunkTrials;
  const int workers = static_cast<int>(
      std::clamp<std::int64_t>(plan.workers, 1, chunks));
  std::vector<double> out(static_cast<std::size_t>(plan.trials));

  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  auto work = [&](int w) {
    try {
      StatisticCache cache;
      for (std::int64_t c = w; c < chunks; c += workers) {
        run_chunk(plan, sampler, c, cache, out.data());
      }
    } catch (...) {
      errors[static_cast<std::size_t>(w)] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto& th : threads) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<CdfPoint> simulate_null_cdf(const SimPlan& plan,
                                        const std::vector<double>& t_grid) {
  std::vector<double> stats = simulate_statistics(plan);
  std::sort(stats.begin(), stats.end());
  const double nt = static_cast<double>(stats.size());
  std::vector<CdfPoint> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    const auto below = static_cast<double>(
        std::upper_bound(stats.begin(), stats.end(), t) - stats.begin());
    const double f = below / nt;
    out.push_back({t, f, std::sqrt(f * (1.0 - f) / nt)});
  }
  return out;
}

double plan_critical_value(const SimPlan& plan) {
  if (plan.critical_value) return *plan.critical_value;
  return calibrated_critical_value(plan.alpha, plan.p0, plan.n, plan.kernel,
                                   plan.model, plan.critical_source,
                                   plan.trials, splitmix64(~plan.seed))
      .value;
}

SimSummary estimate_power(const SimPlan& plan, double critical_value) {
  const std::vector<double> stats = simulate_statistics(plan);
  SimSummary s;
  s.trials_used = static_cast<std::int64_t>(stats.size());
  s.critical_value = critical_value;
  for (double v : stats) {
    if (v > critical_value) ++s.rejections;
  }
  const double nt = static_cast<double>(s.trials_used);
  s.power_hat = static_cast<double>(s.rejections) / nt;
  s.stderr_hat = std::sqrt(s.power_hat * (1.0 - s.power_hat) / nt);
  wilson(s.rejections, s.trials_used, s.ci_low, s.ci_high);
  return s;
}

SimSummary estimate_exponent(const SimPlan& plan, double critical_value) {
  SimSummary s = estimate_power(plan, critical_value);
  if (s.rejections == s.trials_used) {
    s.saturated = true;
    return s;
  }
  const double n = static_cast<double>(plan.n);
  const double miss = 1.0 - s.power_hat;
  const double exponent = -std::log(miss) / n;
  const double se = s.stderr_hat / (n * miss);
  s.exponent_hat = exponent;
  s.exponent_stderr = se;
  s.exponent_ci_low = exponent - kZ95 * se;
  s.exponent_ci_high = exponent + kZ95 * se;
  return s;
}

SampleSizeResult min_sample_size(const SampleSizeQuery& query) {
  if (!(query.beta_target > query.plan.alpha && query.beta_target < 1.0)) {
    throw ValidationError("beta_target must be in (alpha, 1)");
  }
  if (query.n_lo < 1 || query.n_lo > query.n_hi) {
    throw ValidationError("sample-size bounds must satisfy 1 <= n_lo <= n_hi");
  }
  SampleSizeResult result;
  auto evaluate = [&](Count n) {
    SimPlan plan = query.plan;
    plan.n = n;
    ++result.evaluations;
    return estimate_power(plan, plan_critical_value(plan));
  };
  auto qualifies = [&](const SimSummary& s) {
    return s.ci_low >= query.beta_target;
  };

  SimSummary at_lo = evaluate(query.n_lo);
  if (qualifies(at_lo)) {
    result.n = query.n_lo;
    result.at_n = at_lo;
    return result;
  }
  SimSummary at_hi = evaluate(query.n_hi);
  if (!qualifies(at_hi)) {
    throw InfeasibleError(
        "no n in [" + std::to_string(query.n_lo) + ", " +
        std::to_string(query.n_hi) + "] reaches power " +
        std::to_string(query.beta_target) + "; power at the upper bound is " +
        std::to_string(at_hi.power_hat));
  }
  Count lo = query.n_lo;
  Count hi = query.n_hi;
  while (hi - lo > 1) {
    const Count mid = lo + (hi - lo) / 2;
    SimSummary s = evaluate(mid);
    if (qualifies(s)) {
      hi = mid;
      at_hi = s;
    } else {
      lo = mid;
    }
  }
  result.n = hi;
  result.at_n = at_hi;
  return result;
}

}  // namespace privfit

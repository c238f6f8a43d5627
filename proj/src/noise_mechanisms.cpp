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

#include "privfit/noise_mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "privfit/errors.hpp"
#include "privfit/numeric.hpp"

namespace privfit {
namespace {

constexpr int kMaxRadius = 1'000'000;

void check_epsilon_and_radius(double epsilon, int m) {
  if (!std::isfinite(epsilon) || epsilon < 0.0) {
    throw ValidationError("epsilon must be finite and >= 0");
  }
  if (m < 0 || m > kMaxRadius) {
    throw ValidationError("truncation radius m must be in [0, " +
                          std::to_string(kMaxRadius) + "]");
  }
}

}  // namespace

std::string_view to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::kLaplace:
      return "laplace";
    case KernelKind::kGaussian:
      return "gaussian";
    case KernelKind::kCustom:
      return "custom";
  }
  return "unknown";
}

KernelKind kernel_kind_from_string(std::string_view name) {
  if (name == "laplace") return KernelKind::kLaplace;
  if (name == "gaussian") return KernelKind::kGaussian;
  if (name == "custom") return KernelKind::kCustom;
  throw ValidationError("unknown kernel kind '" + std::string(name) + "'");
}

NoiseKernel::NoiseKernel(KernelKind kind, double epsilon, int m,
                         Eigen::VectorXd weights)
    : kind_(kind), epsilon_(epsilon), m_(m), weights_(std::move(weights)) {
  // Pairwise from the tails inwards so symmetric kernels sum symmetrically.
  double total = weights_[m_];
  for (int l = m_; l >= 1; --l) total += weights_[m_ + l] + weights_[m_ - l];
  normalizer_ = total;
  log_probs_ = (weights_.array() / normalizer_).log().matrix();
}

NoiseKernel NoiseKernel::laplace(double epsilon, int m) {
  check_epsilon_and_radius(epsilon, m);
  Eigen::VectorXd w(2 * m + 1);
  for (int l = -m; l <= m; ++l) w[l + m] = std::exp(-epsilon * std::abs(l));
  return NoiseKernel(KernelKind::kLaplace, epsilon, m, std::move(w));
}

NoiseKernel NoiseKernel::gaussian(double epsilon, int m) {
  check_epsilon_and_radius(epsilon, m);
  Eigen::VectorXd w(2 * m + 1);
  const double scale = epsilon / (2.0 * m + 1.0);
  for (int l = -m; l <= m; ++l) {
    w[l + m] = std::exp(-scale * static_cast<double>(l) * l);
  }
  return NoiseKernel(KernelKind::kGaussian, epsilon, m, std::move(w));
}

NoiseKernel NoiseKernel::custom(double epsilon, std::vector<double> weights) {
  if (weights.empty() || weights.size() % 2 == 0) {
    throw ValidationError("custom kernel needs an odd number (2m+1) of weights");
  }
  const int m = static_cast<int>(weights.size() / 2);
  check_epsilon_and_radius(epsilon, m);
  for (double w : weights) {
    if (!std::isfinite(w) || w <= 0.0) {
      throw ValidationError("custom kernel weights must be finite and > 0");
    }
  }
  for (int l = 1; l <= m; ++l) {
    const double left = weights[m - l];
    const double right = weights[m + l];
    if (std::abs(left - right) > 1e-12 * std::max(left, right)) {
      throw ValidationError("custom kernel weights must be symmetric");
    }
  }
  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(
      weights.data(), static_cast<Eigen::Index>(weights.size()));
  return NoiseKernel(KernelKind::kCustom, epsilon, m, std::move(w));
}

NoiseKernel make_kernel(KernelKind kind, double epsilon, int m,
                        std::optional<std::vector<double>> custom_weights) {
  switch (kind) {
    case KernelKind::kLaplace:
      return NoiseKernel::laplace(epsilon, m);
    case KernelKind::kGaussian:
      return NoiseKernel::gaussian(epsilon, m);
    case KernelKind::kCustom: {
      if (!custom_weights) {
        throw ValidationError("custom kernel requires explicit weights");
      }
      if (custom_weights->size() != static_cast<std::size_t>(2 * m + 1)) {
        throw ValidationError("custom kernel needs 2m+1 weights");
      }
      return NoiseKernel::custom(epsilon, std::move(*custom_weights));
    }
  }
  throw ValidationError("unknown kernel kind");
}

double kernel_mean(const NoiseKernel& kernel) {
  double acc = 0.0;
  for (int l = 1; l <= kernel.m(); ++l) {
    acc += l * (kernel.weight(l) - kernel.weight(-l));
  }
  return acc / kernel.normalizer();
}

double kernel_variance(const NoiseKernel& kernel) {
  const double mean = kernel_mean(kernel);
  double acc = 0.0;
  for (int l = 1; l <= kernel.m(); ++l) {
    const double sq = static_cast<double>(l) * l;
    acc += sq * (kernel.weight(l) + kernel.weight(-l));
  }
  return acc / kernel.normalizer() - mean * mean;
}

double kernel_log_mgf(const NoiseKernel& kernel, double z) {
  const int m = kernel.m();
  if (m == 0 || z == 0.0) return 0.0;
  Eigen::ArrayXd terms =
      kernel.log_probabilities().array() +
      z * Eigen::ArrayXd::LinSpaced(2 * m + 1, -m, m);
  return std::max(0.0, log_sum_exp(terms));
}

PrivacyBudget delta_of(const NoiseKernel& kernel) {
  return {kernel.epsilon(), kernel.probability(kernel.m())};
}

NoiseSampler::NoiseSampler(const NoiseKernel& kernel) : m_(kernel.m()) {
  cumulative_.resize(static_cast<std::size_t>(kernel.support_size()));
  double acc = 0.0;
  for (int l = -m_; l <= m_; ++l) {
    acc += kernel.probability(l);
    cumulative_[static_cast<std::size_t>(l + m_)] = acc;
  }
  cumulative_.back() = 1.0;
}

std::vector<int> sample_noise(const NoiseKernel& kernel, std::uint64_t seed,
                              std::size_t count) {
  const NoiseSampler sampler(kernel);
  std::mt19937_64 rng(seed);
  std::vector<int> out(count);
  for (auto& v : out) v = sampler(rng);
  return out;
}

PerturbedTable perturb(const FrequencyTable& table, const NoiseKernel& kernel,
                       std::uint64_t seed) {
  const NoiseSampler sampler(kernel);
  std::mt19937_64 rng(seed);
  return perturb(std::span<const Count>(table.counts()), sampler, rng);
}

PostProcessedTable post_process_nonnegative(const PerturbedTable& b) {
  const auto& values = b.values();
  std::vector<Count> out(values.size());
  Count head = 0;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    out[i] = std::max<Count>(0, values[i]);
    head += out[i];
  }
  out.back() = std::max<Count>(0, b.n() - head);
  return PostProcessedTable(std::move(out));
}

DpReport verify_dp(const NoiseKernel& kernel) {
  const int m = kernel.m();
  if (m < 1) throw ValidationError("verify_dp requires m >= 1");

  DpReport report;
  report.delta = delta_of(kernel).delta;
  const double ratio_bound = std::exp(kernel.epsilon());
  report.holds = true;

  // The mechanism is translation invariant, so a = 0 covers every input.
  constexpr int a = 0;
  for (int neighbor : {a - 1, a + 1}) {
    for (int b = a - m; b <= a + m; ++b) {
      const int l = b - a;
      const int l_neighbor = b - neighbor;
      if (std::abs(l_neighbor) <= m) {
        const double ratio = kernel.weight(l) / kernel.weight(l_neighbor);
        report.worst_ratio = std::max(report.worst_ratio, ratio);
        if (ratio > ratio_bound * (1.0 + 1e-12) && !report.violation) {
          report.holds = false;
          report.violation = DpViolation{a, neighbor, b, ratio, ratio_bound};
        }
      } else {
        const double mass = kernel.probability(l);
        report.boundary_mass = std::max(report.boundary_mass, mass);
        if (mass > report.delta * (1.0 + 1e-12) && !report.violation) {
          report.holds = false;
          report.violation = DpViolation{a, neighbor, b, mass, report.delta};
        }
      }
    }
  }
  return report;
}

}  // namespace privfit

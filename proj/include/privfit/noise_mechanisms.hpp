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

// Truncated convolutional noise kernels on {-m, ..., m} and the table
// perturbation they induce.
//
// A kernel is fully described by 2m+1 positive weights; probabilities are
// weight(l) / normalizer with the normalizer computed by direct summation.
//   laplace:  weight(l) = exp(-eps |l|)
//   gaussian: weight(l) = exp(-eps l^2 / (2m+1))
//   custom:   caller-supplied symmetric weights
// The (eps, delta)-DP level of the per-cell mechanism has
// delta = weight(m) / normalizer, the mass of either boundary atom.

#ifndef PRIVFIT_NOISE_MECHANISMS_HPP_
#define PRIVFIT_NOISE_MECHANISMS_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "privfit/types.hpp"

namespace privfit {

enum class KernelKind { kLaplace, kGaussian, kCustom };

std::string_view to_string(KernelKind kind);
KernelKind kernel_kind_from_string(std::string_view name);

// Immutable after construction; safe to share across threads.
class NoiseKernel {
 public:
  static NoiseKernel laplace(double epsilon, int m);
  static NoiseKernel gaussian(double epsilon, int m);
  // `weights` lists the unnormalized mass at l = -m..m (length 2m+1).
  static NoiseKernel custom(double epsilon, std::vector<double> weights);

  KernelKind kind() const { return kind_; }
  double epsilon() const { return epsilon_; }
  int m() const { return m_; }
  int support_size() const { return 2 * m_ + 1; }

  // Unnormalized weights indexed by l + m.
  const Eigen::VectorXd& weights() const { return weights_; }
  double weight(int l) const { return weights_[l + m_]; }
  double normalizer() const { return normalizer_; }
  double probability(int l) const { return weights_[l + m_] / normalizer_; }
  double log_probability(int l) const { return log_probs_[l + m_]; }
  const Eigen::VectorXd& log_probabilities() const { return log_probs_; }
  bool is_point_mass() const { return m_ == 0; }

 private:
  NoiseKernel(KernelKind kind, double epsilon, int m, Eigen::VectorXd weights);

  KernelKind kind_;
  double epsilon_;
  int m_;
  Eigen::VectorXd weights_;
  Eigen::VectorXd log_probs_;
  double normalizer_;
};

NoiseKernel make_kernel(KernelKind kind, double epsilon, int m,
                        std::optional<std::vector<double>> custom_weights = {});

double kernel_mean(const NoiseKernel& kernel);
double kernel_variance(const NoiseKernel& kernel);

// log E[exp(z L)], evaluated by log-sum-exp. Nonnegative for symmetric
// kernels (Jensen), zero at z = 0.
double kernel_log_mgf(const NoiseKernel& kernel, double z);

struct PrivacyBudget {
  double epsilon = 0.0;
  double delta = 0.0;
};

// delta = weight(m) / normalizer; equals 1 for the point mass (m == 0).
PrivacyBudget delta_of(const NoiseKernel& kernel);

// Inverse-CDF sampler over the 2m+1 atoms.
class NoiseSampler {
 public:
  explicit NoiseSampler(const NoiseKernel& kernel);

  template <typename Urbg>
  int operator()(Urbg& rng) const {
    if (m_ == 0) return 0;
    // 53 random bits -> uniform in [0, 1).
    const double u =
        static_cast<double>(rng() >> 11) * 0x1.0p-53;
    int lo = 0;
    int hi = static_cast<int>(cumulative_.size()) - 1;
    while (lo < hi) {
      const int mid = (lo + hi) / 2;
      if (u < cumulative_[mid]) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    return lo - m_;
  }

  int m() const { return m_; }

 private:
  int m_;
  std::vector<double> cumulative_;
};

// Deterministic given the seed (std::mt19937_64 stream).
std::vector<int> sample_noise(const NoiseKernel& kernel, std::uint64_t seed,
                              std::size_t count);

// Adds independent kernel noise to the first k-1 cells; the last cell keeps
// the total at n.
PerturbedTable perturb(const FrequencyTable& table, const NoiseKernel& kernel,
                       std::uint64_t seed);

template <typename Urbg>
PerturbedTable perturb(std::span<const Count> counts, const NoiseSampler& sampler,
                       Urbg& rng) {
  std::vector<Count> values(counts.begin(), counts.end());
  Count shift = 0;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    const int l = sampler(rng);
    values[i] += l;
    shift += l;
  }
  values.back() -= shift;
  return PerturbedTable(std::move(values));
}

// b+_i = max(0, b_i) for i < k, b+_k = max(0, n - sum_{i<k} b+_i).
PostProcessedTable post_process_nonnegative(const PerturbedTable& b);

struct DpViolation {
  int input = 0;     // a
  int neighbor = 0;  // a' = a +- 1
  int output = 0;    // b
  double value = 0.0;
  double bound = 0.0;
};

struct DpReport {
  bool holds = false;
  // max over neighbor pairs of weight(b-a) / weight(b-a') where both are in
  // the support.
  double worst_ratio = 0.0;
  // Largest single-output mass reachable from a but not from a'.
  double boundary_mass = 0.0;
  double delta = 0.0;
  std::optional<DpViolation> violation;
};

// Exhaustive single-cell check of the (eps, delta) condition for neighbor
// shifts a' = a +- 1 and all outputs within the truncation radius.
DpReport verify_dp(const NoiseKernel& kernel);

}  // namespace privfit

#endif  // PRIVFIT_NOISE_MECHANISMS_HPP_

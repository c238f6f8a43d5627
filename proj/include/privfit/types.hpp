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

// Value types shared by every module: frequency tables before and after
// perturbation, and points of the open probability simplex.
//
// Tables always store all k cells. The last cell is derived from the total
// (k-th cell = n - sum of the first k-1), mirroring how the mechanism only
// perturbs the first k-1 cells.

#ifndef PRIVFIT_TYPES_HPP_
#define PRIVFIT_TYPES_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace privfit {

using Count = std::int64_t;

// Raw cell counts a_1..a_k with total n. Requires k >= 2, counts >= 0 and
// n > k.
class FrequencyTable {
 public:
  explicit FrequencyTable(std::vector<Count> counts);

  const std::vector<Count>& counts() const { return counts_; }
  Count n() const { return n_; }
  int k() const { return static_cast<int>(counts_.size()); }
  std::span<const Count> free_counts() const {
    return std::span<const Count>(counts_).first(counts_.size() - 1);
  }

  friend bool operator==(const FrequencyTable&, const FrequencyTable&) = default;

 private:
  std::vector<Count> counts_;
  Count n_ = 0;
};

// Released table b. Entries may be negative; the total equals the original n.
class PerturbedTable {
 public:
  // All k values; n is their sum.
  explicit PerturbedTable(std::vector<Count> values);

  // First k-1 values plus the total; the last cell becomes n - |b|.
  static PerturbedTable from_free(std::span<const Count> free_values, Count n);

  const std::vector<Count>& values() const { return values_; }
  Count n() const { return n_; }
  int k() const { return static_cast<int>(values_.size()); }
  std::span<const Count> free_values() const {
    return std::span<const Count>(values_).first(values_.size() - 1);
  }
  bool all_nonnegative() const;

  friend bool operator==(const PerturbedTable&, const PerturbedTable&) = default;

 private:
  std::vector<Count> values_;
  Count n_ = 0;
};

// b+ after clamping negative entries at zero. n_plus may differ from n.
class PostProcessedTable {
 public:
  explicit PostProcessedTable(std::vector<Count> values);

  const std::vector<Count>& values() const { return values_; }
  Count n_plus() const { return n_plus_; }
  int k() const { return static_cast<int>(values_.size()); }

  friend bool operator==(const PostProcessedTable&,
                         const PostProcessedTable&) = default;

 private:
  std::vector<Count> values_;
  Count n_plus_ = 0;
};

// Point p = (p_1..p_{k-1}) of the open simplex; p_k = 1 - |p| is implied.
class SimplexPoint {
 public:
  explicit SimplexPoint(Eigen::VectorXd probs, double interior_margin = 0.0);

  // Builds from all k probabilities (must sum to 1 within 1e-12).
  static SimplexPoint from_full(const Eigen::VectorXd& full,
                                double interior_margin = 0.0);

  // Clamps every cell of `full` (length k, entries may be <= 0 or unnormalized
  // only through clamping) to at least `margin` and renormalizes the remaining
  // cells proportionally so that the k cells sum to one.
  static SimplexPoint clamped(const Eigen::VectorXd& full, double margin);

  // Uniform point on k cells.
  static SimplexPoint uniform(int k);

  const Eigen::VectorXd& probs() const { return probs_; }
  int k() const { return static_cast<int>(probs_.size()) + 1; }
  double last() const { return 1.0 - probs_.sum(); }
  double operator[](int i) const { return i + 1 == k() ? last() : probs_[i]; }
  Eigen::VectorXd full() const;
  double interior_margin() const { return interior_margin_; }

 private:
  Eigen::VectorXd probs_;
  double interior_margin_;
};

// Interior margin used when clamping estimators computed from a table with
// total n and k cells.
inline double interior_margin_for(Count n, int k) {
  return 1.0 / (2.0 * static_cast<double>(n) + k);
}

}  // namespace privfit

#endif  // PRIVFIT_TYPES_HPP_

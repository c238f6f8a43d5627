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

#include "privfit/types.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "privfit/errors.hpp"

namespace privfit {

FrequencyTable::FrequencyTable(std::vector<Count> counts)
    : counts_(std::move(counts)) {
  if (counts_.size() < 2) {
    throw ValidationError("frequency table needs at least 2 cells");
  }
  for (Count c : counts_) {
    if (c < 0) throw ValidationError("frequency table counts must be >= 0");
  }
  n_ = std::accumulate(counts_.begin(), counts_.end(), Count{0});
  if (n_ <= k()) {
    throw ValidationError("frequency table total n=" + std::to_string(n_) +
                          " must exceed the number of cells k=" +
                          std::to_string(k()));
  }
}

PerturbedTable::PerturbedTable(std::vector<Count> values)
    : values_(std::move(values)) {
  if (values_.size() < 2) {
    throw ValidationError("perturbed table needs at least 2 cells");
  }
  n_ = std::accumulate(values_.begin(), values_.end(), Count{0});
  if (n_ <= 0) throw ValidationError("perturbed table total must be positive");
}

PerturbedTable PerturbedTable::from_free(std::span<const Count> free_values,
                                         Count n) {
  std::vector<Count> values(free_values.begin(), free_values.end());
  const Count head = std::accumulate(values.begin(), values.end(), Count{0});
  values.push_back(n - head);
  return PerturbedTable(std::move(values));
}

bool PerturbedTable::all_nonnegative() const {
  for (Count v : values_) {
    if (v < 0) return false;
  }
  return true;
}

PostProcessedTable::PostProcessedTable(std::vector<Count> values)
    : values_(std::move(values)) {
  if (values_.size() < 2) {
    throw ValidationError("post-processed table needs at least 2 cells");
  }
  for (Count v : values_) {
    if (v < 0) throw ValidationError("post-processed values must be >= 0");
  }
  n_plus_ = std::accumulate(values_.begin(), values_.end(), Count{0});
}

SimplexPoint::SimplexPoint(Eigen::VectorXd probs, double interior_margin)
    : probs_(std::move(probs)), interior_margin_(interior_margin) {
  if (probs_.size() < 1) {
    throw ValidationError("simplex point needs at least one free coordinate");
  }
  if (!probs_.allFinite()) {
    throw ValidationError("simplex point has non-finite coordinates");
  }
  if (probs_.minCoeff() <= 0.0 || last() <= 0.0) {
    throw ValidationError("simplex point must lie in the open simplex");
  }
  if (interior_margin_ < 0.0) {
    throw ValidationError("interior margin must be nonnegative");
  }
  const double smallest = std::min(probs_.minCoeff(), last());
  if (interior_margin_ > smallest * (1.0 + 1e-12)) {
    throw ValidationError("interior margin exceeds the smallest coordinate");
  }
}

SimplexPoint SimplexPoint::from_full(const Eigen::VectorXd& full,
                                     double interior_margin) {
  if (full.size() < 2) {
    throw ValidationError("full probability vector needs at least 2 cells");
  }
  if (std::abs(full.sum() - 1.0) > 1e-12) {
    throw ValidationError("full probability vector must sum to 1");
  }
  return SimplexPoint(full.head(full.size() - 1), interior_margin);
}

SimplexPoint SimplexPoint::clamped(const Eigen::VectorXd& full,
                                   double margin) {
  const Eigen::Index k = full.size();
  if (k < 2) throw ValidationError("clamp needs at least 2 cells");
  if (!(margin > 0.0) || margin * static_cast<double>(k) >= 1.0) {
    throw ValidationError("interior margin must be in (0, 1/k)");
  }
  Eigen::VectorXd q = full;
  std::vector<bool> fixed(static_cast<std::size_t>(k), false);
  for (int pass = 0; pass <= k; ++pass) {
    Eigen::Index n_fixed = 0;
    double free_mass = 0.0;
    bool changed = false;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (!fixed[i] && q[i] < margin) {
        fixed[i] = true;
        changed = true;
      }
      if (fixed[i]) {
        q[i] = margin;
        ++n_fixed;
      } else {
        free_mass += q[i];
      }
    }
    const double target = 1.0 - static_cast<double>(n_fixed) * margin;
    if (!changed && std::abs(free_mass - target) <= 1e-15) break;
    if (free_mass <= 0.0) {
      // Nothing left to rescale: spread the remaining mass evenly.
      const double share = target / static_cast<double>(k - n_fixed);
      for (Eigen::Index i = 0; i < k; ++i) {
        if (!fixed[i]) q[i] = share;
      }
      break;
    }
    const double scale = target / free_mass;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (!fixed[i]) q[i] *= scale;
    }
  }
  return SimplexPoint(q.head(k - 1), margin);
}

SimplexPoint SimplexPoint::uniform(int k) {
  if (k < 2) throw ValidationError("uniform point needs k >= 2");
  return SimplexPoint(Eigen::VectorXd::Constant(k - 1, 1.0 / k));
}

Eigen::VectorXd SimplexPoint::full() const {
  Eigen::VectorXd out(probs_.size() + 1);
  out.head(probs_.size()) = probs_;
  out[probs_.size()] = last();
  return out;
}

}  // namespace privfit

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

#ifndef PRIVFIT_NUMERIC_HPP_
#define PRIVFIT_NUMERIC_HPP_

#include <cmath>
#include <limits>

#include <Eigen/Core>

namespace privfit {

template <typename Scalar>
inline constexpr Scalar kNegInf = -std::numeric_limits<Scalar>::infinity();

// log(sum_i exp(x_i)) with the largest term factored out. Returns -inf for an
// empty or all -inf argument.
template <typename Derived>
typename Derived::Scalar log_sum_exp(const Eigen::DenseBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  if (x.size() == 0) return kNegInf<Scalar>;
  const Scalar top = x.maxCoeff();
  if (top == kNegInf<Scalar>) return top;
  return top + std::log((x.derived().array() - top).exp().sum());
}

// Streaming log-sum-exp. Rescales the running sum whenever a larger term
// arrives so that no partial sum overflows.
template <typename Scalar>
class LogSumExpAccumulator {
 public:
  void add(Scalar log_term) {
    if (log_term == kNegInf<Scalar>) return;
    if (log_term <= max_) {
      sum_ += std::exp(log_term - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - log_term) + Scalar(1);
      max_ = log_term;
    }
  }

  Scalar value() const {
    return max_ == kNegInf<Scalar> ? max_ : max_ + std::log(sum_);
  }
  Scalar max_term() const { return max_; }
  bool empty() const { return max_ == kNegInf<Scalar>; }

 private:
  Scalar max_ = kNegInf<Scalar>;
  Scalar sum_ = Scalar(0);
};

template <typename Scalar>
Scalar log_factorial(Scalar x) {
  return std::lgamma(x + Scalar(1));
}

// x * log(y) with the convention 0 * log(0) = 0.
template <typename Scalar>
Scalar xlogy(Scalar x, Scalar y) {
  return x == Scalar(0) ? Scalar(0) : x * std::log(y);
}

}  // namespace privfit

#endif  // PRIVFIT_NUMERIC_HPP_

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

#ifndef PRIVFIT_ERRORS_HPP_
#define PRIVFIT_ERRORS_HPP_

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace privfit {

// Root of the library's exception hierarchy. Two families exist: input
// problems (ValidationError and subclasses) and numerical failures
// (NumericalError and subclasses). The CLI maps them to exit codes 2 and 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

// Arguments outside the mathematical domain of an operation (e.g. a count
// vector outside the multinomial support).
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Exact evaluation or enumeration would exceed a documented size cap.
class SizeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Data carry no information for the requested estimator (e.g. n+ == 0).
class DegenerateDataError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A request that contradicts the hypothesis of the result being evaluated.
class RegimeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// The target point lies on or outside the convex hull of a support.
class InfeasibleError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

// Iterative solver failed to converge; carries the last iterate.
class OptimizerError : public NumericalError {
 public:
  OptimizerError(const std::string& what, Eigen::VectorXd last_iterate,
                 double gradient_norm)
      : NumericalError(what),
        last_iterate_(std::move(last_iterate)),
        gradient_norm_(gradient_norm) {}

  const Eigen::VectorXd& last_iterate() const { return last_iterate_; }
  double gradient_norm() const { return gradient_norm_; }

 private:
  Eigen::VectorXd last_iterate_;
  double gradient_norm_;
};

// An invariant that should hold by construction was observed broken.
class ConsistencyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace privfit

#endif  // PRIVFIT_ERRORS_HPP_

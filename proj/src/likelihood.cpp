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

#include "privfit/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>

#include "privfit/errors.hpp"
#include "privfit/numeric.hpp"

namespace privfit {
namespace {

void check_dimensions(const SimplexPoint& p, int k) {
  if (p.k() != k) {
    throw ValidationError("simplex point has k=" + std::to_string(p.k()) +
                          " but the table has k=" + std::to_string(k));
  }
}

void check_lattice_size(int m, int k) {
  std::int64_t size = 1;
  for (int i = 0; i + 1 < k; ++i) {
    size *= 2 * static_cast<std::int64_t>(m) + 1;
    if (size > kMaxLatticeSize) {
      throw SizeError("noise lattice (2m+1)^(k-1) exceeds " +
                      std::to_string(kMaxLatticeSize) + " points");
    }
  }
}

// Enumerates the clipped noise lattice for b. For every l whose table a = b - l
// lies in the multinomial support, calls visit(a, log_const) where a holds all
// k counts and log_const = sum_i log Pr[L = l_i] + log n! - sum_j log a_j!.
template <typename Visit>
void for_each_support_term(const PerturbedTable& b, const NoiseKernel& kernel,
                           Visit&& visit) {
  const int k = b.k();
  const int m = kernel.m();
  const Count n = b.n();
  check_lattice_size(m, k);
  const auto& values = b.values();

  std::vector<Count> lo(k - 1), hi(k - 1);
  for (int i = 0; i + 1 < k; ++i) {
    lo[i] = std::max<Count>(-m, values[i] - n);
    hi[i] = std::min<Count>(m, values[i]);
    if (lo[i] > hi[i]) return;
  }

  const double log_n_factorial = log_factorial(static_cast<double>(n));
  std::vector<Count> l(lo);
  std::vector<Count> a(k);
  while (true) {
    Count shift = 0;
    double log_const = log_n_factorial;
    for (int i = 0; i + 1 < k; ++i) {
      a[i] = values[i] - l[i];
      shift += l[i];
      log_const += kernel.log_probability(static_cast<int>(l[i])) -
                   log_factorial(static_cast<double>(a[i]));
    }
    a[k - 1] = values[k - 1] + shift;
    if (a[k - 1] >= 0) {
      log_const -= log_factorial(static_cast<double>(a[k - 1]));
      visit(std::as_const(a), log_const);
    }
    int i = 0;
    while (i + 1 < k && l[i] == hi[i]) {
      l[i] = lo[i];
      ++i;
    }
    if (i + 1 == k) break;
    ++l[i];
  }
}

double term_log_value(const std::vector<Count>& a, double log_const,
                      const Eigen::VectorXd& log_q) {
  double t = log_const;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] != 0) t += static_cast<double>(a[j]) * log_q[j];
  }
  return t;
}

// Value, full-coordinate gradient G_j = d/dq_j and Hessian of log L(q; b)
// treating all k cells as independent variables.
struct FullDerivatives {
  double value = kNegInf<double>;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
  bool impossible = true;
};

FullDerivatives full_derivatives(const Eigen::VectorXd& q,
                                 const PerturbedTable& b,
                                 const NoiseKernel& kernel) {
  const int k = b.k();
  const Eigen::VectorXd log_q = q.array().log().matrix();
  const Eigen::ArrayXd inv_q = q.array().inverse();

  // Streaming weighted moments with rescaling on a new maximum.
  double top = kNegInf<double>;
  double s0 = 0.0;
  Eigen::VectorXd s1 = Eigen::VectorXd::Zero(k);
  Eigen::MatrixXd s2 = Eigen::MatrixXd::Zero(k, k);
  Eigen::VectorXd s_diag = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd u(k), a_over_q2(k);

  for_each_support_term(b, kernel, [&](const std::vector<Count>& a,
                                       double log_const) {
    const double t = term_log_value(a, log_const, log_q);
    if (t > top) {
      const double scale = std::exp(top - t);
      s0 *= scale;
      s1 *= scale;
      s2 *= scale;
      s_diag *= scale;
      top = t;
    }
    const double w = std::exp(t - top);
    for (int j = 0; j < k; ++j) {
      const double aj = static_cast<double>(a[j]);
      u[j] = aj * inv_q[j];
      a_over_q2[j] = aj * inv_q[j] * inv_q[j];
    }
    s0 += w;
    s1.noalias() += w * u;
    s2.noalias() += w * u * u.transpose();
    s_diag.noalias() += w * a_over_q2;
  });

  FullDerivatives out;
  if (s0 == 0.0) return out;
  out.impossible = false;
  out.value = top + std::log(s0);
  out.gradient = s1 / s0;
  out.hessian = s2 / s0 - out.gradient * out.gradient.transpose();
  out.hessian.diagonal() -= s_diag / s0;
  return out;
}

// Projects full-coordinate derivatives onto the coordinates `vars`, with
// cell `ref` absorbing the simplex constraint.
void reduce(const FullDerivatives& full, const std::vector<int>& vars, int ref,
            Eigen::VectorXd& g, Eigen::MatrixXd& h) {
  const auto d = static_cast<Eigen::Index>(vars.size());
  g.resize(d);
  h.resize(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const int vi = vars[i];
    g[i] = full.gradient[vi] - full.gradient[ref];
    for (Eigen::Index j = 0; j < d; ++j) {
      const int vj = vars[j];
      h(i, j) = full.hessian(vi, vj) - full.hessian(vi, ref) -
                full.hessian(ref, vj) + full.hessian(ref, ref);
    }
  }
}

double true_log_likelihood_full(const Eigen::VectorXd& q,
                                const PerturbedTable& b,
                                const NoiseKernel& kernel) {
  const Eigen::VectorXd log_q = q.array().log().matrix();
  LogSumExpAccumulator<double> acc;
  for_each_support_term(b, kernel, [&](const std::vector<Count>& a,
                                       double log_const) {
    acc.add(term_log_value(a, log_const, log_q));
  });
  return acc.value();
}

Eigen::VectorXd empirical_full(const PerturbedTable& b) {
  Eigen::VectorXd full(b.k());
  for (int j = 0; j < b.k(); ++j) {
    full[j] = static_cast<double>(b.values()[j]) / static_cast<double>(b.n());
  }
  return full;
}

}  // namespace

double multinomial_log_pmf(const SimplexPoint& p, std::span<const Count> a) {
  check_dimensions(p, static_cast<int>(a.size()));
  double n = 0.0;
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] < 0) {
      throw DomainError("count vector lies outside the multinomial support");
    }
    const double aj = static_cast<double>(a[j]);
    n += aj;
    acc += xlogy(aj, p[static_cast<int>(j)]) - log_factorial(aj);
  }
  return acc + log_factorial(n);
}

double multinomial_log_pmf(const SimplexPoint& p, const FrequencyTable& a) {
  return multinomial_log_pmf(p, std::span<const Count>(a.counts()));
}

double multinomial_max_log_likelihood(std::span<const Count> a) {
  double n = 0.0;
  for (Count c : a) {
    if (c < 0) {
      throw DomainError("count vector lies outside the multinomial support");
    }
    n += static_cast<double>(c);
  }
  if (n <= 0.0) throw DegenerateDataError("count vector has zero total");
  double acc = log_factorial(n);
  for (Count c : a) {
    const double x = static_cast<double>(c);
    acc += xlogy(x, x / n) - log_factorial(x);
  }
  return acc;
}

LogLikelihood true_log_likelihood(const SimplexPoint& p,
                                  const PerturbedTable& b,
                                  const NoiseKernel& kernel) {
  check_dimensions(p, b.k());
  const double value = true_log_likelihood_full(p.full(), b, kernel);
  return {value, value == kNegInf<double>};
}

LikelihoodDerivatives true_log_likelihood_derivatives(
    const SimplexPoint& p, const PerturbedTable& b, const NoiseKernel& kernel) {
  check_dimensions(p, b.k());
  const int k = b.k();
  const FullDerivatives full = full_derivatives(p.full(), b, kernel);
  LikelihoodDerivatives out;
  out.impossible = full.impossible;
  out.value = full.value;
  if (full.impossible) return out;
  std::vector<int> vars(k - 1);
  for (int i = 0; i + 1 < k; ++i) vars[i] = i;
  reduce(full, vars, k - 1, out.gradient, out.hessian);
  return out;
}

std::int64_t support_term_count(const PerturbedTable& b,
                                const NoiseKernel& kernel) {
  std::int64_t count = 0;
  for_each_support_term(b, kernel,
                        [&](const std::vector<Count>&, double) { ++count; });
  return count;
}

double h_factor(const SimplexPoint& p, const PerturbedTable& b,
                const NoiseKernel& kernel) {
  check_dimensions(p, b.k());
  const int k = b.k();
  const int m = kernel.m();
  const Count n = b.n();
  const auto& values = b.values();
  for (Count v : values) {
    if (v < 0 || v > n) {
      throw DomainError("h_factor requires b inside the multinomial support");
    }
  }
  check_lattice_size(m, k);

  const double log_pk = std::log(p.last());
  std::vector<double> log_ratio(k - 1);  // log(p_k / p_i)
  std::vector<Count> lo(k - 1), hi(k - 1);
  for (int i = 0; i + 1 < k; ++i) {
    log_ratio[i] = log_pk - std::log(p[i]);
    lo[i] = std::max<Count>(-m, values[i] - n);
    hi[i] = std::min<Count>(m, values[i]);
  }
  const double bk = static_cast<double>(values[k - 1]);

  LogSumExpAccumulator<double> acc;
  std::vector<Count> l(lo);
  while (true) {
    Count shift = 0;
    double t = 0.0;
    for (int i = 0; i + 1 < k; ++i) {
      const double bi = static_cast<double>(values[i]);
      const double li = static_cast<double>(l[i]);
      shift += l[i];
      t += kernel.log_probability(static_cast<int>(l[i])) + log_factorial(bi) -
           log_factorial(bi - li) + li * log_ratio[i];
    }
    if (values[k - 1] + shift >= 0) {
      const double s = static_cast<double>(shift);
      t += log_factorial(bk) - log_factorial(bk + s);
      acc.add(t);
    }
    int i = 0;
    while (i + 1 < k && l[i] == hi[i]) {
      l[i] = lo[i];
      ++i;
    }
    if (i + 1 == k) break;
    ++l[i];
  }
  return std::exp(acc.value());
}

double naive_log_likelihood(const SimplexPoint& p,
                            const PostProcessedTable& bplus) {
  return multinomial_log_pmf(p, std::span<const Count>(bplus.values()));
}

SimplexPoint mle_naive(const PostProcessedTable& bplus) {
  if (bplus.n_plus() == 0) {
    throw DegenerateDataError("post-processed table has n+ = 0");
  }
  const int k = bplus.k();
  Eigen::VectorXd full(k);
  for (int j = 0; j < k; ++j) {
    full[j] = static_cast<double>(bplus.values()[j]) /
              static_cast<double>(bplus.n_plus());
  }
  return SimplexPoint::clamped(full, interior_margin_for(bplus.n_plus(), k));
}

SimplexPoint mle_true(const PerturbedTable& b, const NoiseKernel& kernel,
                      const MleOptions& options) {
  const int k = b.k();
  const double margin = interior_margin_for(b.n(), k);
  if (support_term_count(b, kernel) == 0) {
    throw DegenerateDataError(
        "perturbed table is impossible under the kernel (empty support)");
  }
  if (kernel.is_point_mass()) {
    return SimplexPoint::clamped(empirical_full(b), margin);
  }

  Eigen::VectorXd q = SimplexPoint::clamped(empirical_full(b), margin).full();
  std::vector<bool> pinned(k);
  for (int j = 0; j < k; ++j) pinned[j] = q[j] <= margin * (1.0 + 1e-12);

  const double scale = static_cast<double>(b.n());
  const double threshold = options.tol * scale;
  double grad_norm = 0.0;

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    const FullDerivatives full = full_derivatives(q, b, kernel);
    if (full.impossible) {
      throw ConsistencyError("true likelihood vanished inside the domain");
    }

    std::vector<int> vars;
    int ref = -1;
    for (int j = 0; j < k; ++j) {
      if (pinned[j]) continue;
      if (ref < 0 || q[j] > q[ref]) ref = j;
    }
    for (int j = 0; j < k; ++j) {
      if (!pinned[j] && j != ref) vars.push_back(j);
    }

    Eigen::VectorXd g;
    Eigen::MatrixXd h;
    reduce(full, vars, ref, g, h);
    grad_norm = vars.empty() ? 0.0 : g.cwiseAbs().maxCoeff();

    Eigen::VectorXd dir;
    double decrement = 0.0;
    if (!vars.empty()) {
      Eigen::LLT<Eigen::MatrixXd> llt(-h);
      if (llt.info() == Eigen::Success) {
        dir = llt.solve(g);
        decrement = g.dot(dir);
      } else {
        dir = g / std::max(1.0, h.cwiseAbs().maxCoeff());
        decrement = std::numeric_limits<double>::infinity();
      }
    }

    if (grad_norm <= threshold || decrement < 1e-20) {
      // Reduced problem solved: release the pinned cell that most wants to
      // grow, if any; otherwise the KKT conditions hold.
      int release = -1;
      double best = threshold;
      for (int j = 0; j < k; ++j) {
        if (!pinned[j]) continue;
        const double push = full.gradient[j] - full.gradient[ref];
        if (push > best) {
          best = push;
          release = j;
        }
      }
      if (release < 0) {
        return SimplexPoint(q.head(k - 1), margin);
      }
      pinned[release] = false;
      continue;
    }

    // Full-space step with the reference cell absorbing the constraint.
    Eigen::VectorXd step = Eigen::VectorXd::Zero(k);
    for (std::size_t i = 0; i < vars.size(); ++i) {
      step[vars[i]] = dir[static_cast<Eigen::Index>(i)];
    }
    step[ref] = -dir.sum();

    double t_max = std::numeric_limits<double>::infinity();
    int blocking = -1;
    for (int j = 0; j < k; ++j) {
      if (step[j] < 0.0) {
        const double t = (q[j] - margin) / -step[j];
        if (t < t_max) {
          t_max = t;
          blocking = j;
        }
      }
    }

    const double current = full.value;
    double t = std::min(1.0, t_max);
    Eigen::VectorXd candidate;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving) {
      candidate = q + t * step;
      if (t == t_max && blocking >= 0) candidate[blocking] = margin;
      const double value = true_log_likelihood_full(candidate, b, kernel);
      if (value >= current - 1e-14 * std::abs(current)) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      throw OptimizerError("true-model MLE line search failed", q.head(k - 1),
                           grad_norm / scale);
    }
    if (t == t_max && blocking >= 0) pinned[blocking] = true;
    q = candidate;
    // Restore the simplex constraint exactly on the reference cell.
    q[ref] = 0.0;
    q[ref] = 1.0 - q.sum();
  }
  throw OptimizerError("true-model MLE did not converge in " +
                           std::to_string(options.max_iterations) +
                           " iterations",
                       q.head(k - 1), grad_norm / scale);
}

Eigen::MatrixXd fisher_information(const SimplexPoint& p) {
  const auto d = p.probs().size();
  Eigen::MatrixXd info = Eigen::MatrixXd::Constant(d, d, 1.0 / p.last());
  info.diagonal() += p.probs().cwiseInverse();
  return info;
}

Eigen::MatrixXd covariance_matrix(const SimplexPoint& p) {
  const Eigen::VectorXd& q = p.probs();
  Eigen::MatrixXd cov = -q * q.transpose();
  cov.diagonal() += q;
  return cov;
}

}  // namespace privfit

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

#include "privfit/sharp_ld.hpp"

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

double log_add(double a, double b) {
  if (a == kNegInf<double>) return b;
  if (b == kNegInf<double>) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace

LatticeDistribution::LatticeDistribution(Eigen::MatrixXd points,
                                         Eigen::VectorXd probs)
    : points_(std::move(points)), probs_(std::move(probs)) {
  if (points_.rows() < 1 || points_.cols() < 1) {
    throw ValidationError("distribution needs d >= 1 and at least one atom");
  }
  if (points_.cols() != probs_.size()) {
    throw ValidationError("one probability per atom is required");
  }
  if (!points_.allFinite() || !probs_.allFinite()) {
    throw ValidationError("atoms and probabilities must be finite");
  }
  if (probs_.minCoeff() <= 0.0) {
    throw ValidationError("atom probabilities must be positive");
  }
  if (std::abs(probs_.sum() - 1.0) > 1e-12) {
    throw ValidationError("atom probabilities must sum to 1");
  }
}

LatticeDistribution LatticeDistribution::bernoulli(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ValidationError("bernoulli parameter must be in (0, 1)");
  }
  Eigen::MatrixXd points(1, 2);
  points << 0.0, 1.0;
  Eigen::VectorXd probs(2);
  probs << 1.0 - p, p;
  return LatticeDistribution(std::move(points), std::move(probs));
}

LatticeDistribution LatticeDistribution::multinomial_indicator(
    const SimplexPoint& p) {
  const int d = p.k() - 1;
  Eigen::MatrixXd points = Eigen::MatrixXd::Zero(d, d + 1);
  points.leftCols(d).setIdentity();
  return LatticeDistribution(std::move(points), p.full());
}

LatticeDistribution LatticeDistribution::centered() const {
  const Eigen::VectorXd mu = mean();
  return LatticeDistribution(points_.colwise() - mu, probs_);
}

CumulantEval cumulant(const LatticeDistribution& dist,
                      const Eigen::VectorXd& z) {
  if (z.size() != dist.dim()) {
    throw ValidationError("z has the wrong dimension");
  }
  const Eigen::VectorXd s =
      dist.points().transpose() * z + dist.probs().array().log().matrix();
  CumulantEval out;
  out.value = log_sum_exp(s);
  const Eigen::VectorXd w = (s.array() - out.value).exp().matrix();
  out.gradient = dist.points() * w;
  out.hessian = dist.points() * w.asDiagonal() * dist.points().transpose() -
                out.gradient * out.gradient.transpose();
  return out;
}

LegendreResult legendre_transform(const LatticeDistribution& dist,
                                  const Eigen::VectorXd& xi) {
  const int d = dist.dim();
  if (xi.size() != d) throw ValidationError("xi has the wrong dimension");
  for (int i = 0; i < d; ++i) {
    const double lo = dist.points().row(i).minCoeff();
    const double hi = dist.points().row(i).maxCoeff();
    if (!(xi[i] > lo && xi[i] < hi)) {
      throw InfeasibleError(
          "xi lies outside the interior of the support's convex hull");
    }
  }

  LegendreResult out;
  out.zhat = Eigen::VectorXd::Zero(d);
  auto objective = [&](const Eigen::VectorXd& z) {
    return cumulant(dist, z).value - z.dot(xi);
  };
  double residual = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 200; ++iter) {
    const CumulantEval c = cumulant(dist, out.zhat);
    const Eigen::VectorXd r = c.gradient - xi;
    residual = r.cwiseAbs().maxCoeff();
    out.iterations = iter;
    if (residual < 1e-12) {
      out.rate = std::max(0.0, out.zhat.dot(xi) - c.value);
      return out;
    }
    Eigen::MatrixXd h = c.hessian;
    Eigen::LLT<Eigen::MatrixXd> llt(h);
    double ridge = 1e-12 * std::max(1.0, h.diagonal().maxCoeff());
    while (llt.info() != Eigen::Success) {
      h.diagonal().array() += ridge;
      ridge *= 10.0;
      llt.compute(h);
    }
    const Eigen::VectorXd step = -llt.solve(r);
    const double f0 = c.value - out.zhat.dot(xi);
    // Armijo on the objective; near the optimum its change drowns in
    // rounding, so a step that shrinks the residual is accepted instead.
    const double noise = 1e-14 * std::max(1.0, std::abs(f0));
    auto acceptable = [&](const Eigen::VectorXd& z, double t) {
      const double f = objective(z);
      if (f <= f0 + 1e-4 * t * r.dot(step)) return true;
      return f <= f0 + noise &&
             (cumulant(dist, z).gradient - xi).cwiseAbs().maxCoeff() < residual;
    };
    double t = 1.0;
    Eigen::VectorXd candidate = out.zhat + step;
    while (!acceptable(candidate, t) && t > 1e-12) {
      t *= 0.5;
      candidate = out.zhat + t * step;
    }
    out.zhat = candidate;
    if (out.zhat.cwiseAbs().maxCoeff() > 1e4) {
      throw InfeasibleError("tilting point diverges; xi is on the hull boundary");
    }
  }
  throw OptimizerError("Legendre transform Newton solve did not converge",
                       out.zhat, residual);
}

RegionSupportFn interval_region(double lo, double hi) {
  if (lo > hi) throw ValidationError("interval region needs lo <= hi");
  return [lo, hi](const Eigen::VectorXd& z) {
    return std::min(z[0] * lo, z[0] * hi);
  };
}

RegionSupportFn box_region(Eigen::VectorXd lo, Eigen::VectorXd hi) {
  if (lo.size() != hi.size() || (lo.array() > hi.array()).any()) {
    throw ValidationError("box region needs matching corners with lo <= hi");
  }
  return [lo = std::move(lo), hi = std::move(hi)](const Eigen::VectorXd& z) {
    return (z.array() * lo.array()).min(z.array() * hi.array()).sum();
  };
}

RegionSupportFn ball_region(double radius) {
  if (radius < 0.0) throw ValidationError("ball radius must be >= 0");
  return [radius](const Eigen::VectorXd& z) { return -radius * z.norm(); };
}

LDEstimate sharp_ld_estimate(const LatticeDistribution& dist,
                             const Eigen::VectorXd& xi,
                             const RegionSupportFn& region, std::int64_t n) {
  if (n < 1) throw ValidationError("n must be >= 1");
  if (dist.mean().cwiseAbs().maxCoeff() > 1e-12) {
    throw ValidationError("sharp LD estimate requires a centered distribution");
  }
  const LegendreResult lt = legendre_transform(dist, xi);
  const double nd = static_cast<double>(n);
  LDEstimate out;
  out.zhat = lt.zhat;
  out.rate = lt.rate;
  out.boundary_term = region(lt.zhat);
  out.log_prefactor_exponent = -0.25 * (dist.dim() + 1);
  out.log_estimate_up_to_constant = -nd * out.rate -
                                    std::sqrt(nd) * out.boundary_term +
                                    out.log_prefactor_exponent * std::log(nd);
  return out;
}

double exact_tail_log_probability(const LatticeDistribution& dist, double xi,
                                  double lo, double hi, std::int64_t n) {
  if (dist.dim() != 1) throw SizeError("exact tail oracle supports d = 1 only");
  if (n < 1 || n > 2000) throw SizeError("exact tail oracle supports n <= 2000");
  if (lo > hi) throw ValidationError("window needs lo <= hi");

  const Eigen::RowVectorXd x = dist.points().row(0);
  const double base = x.minCoeff();
  const Eigen::RowVectorXd offsets = x.array() - base;

  // Lattice span: the largest s with every offset an integer multiple of s.
  double first = std::numeric_limits<double>::infinity();
  for (double o : offsets) {
    if (o > 1e-12) first = std::min(first, o);
  }
  double span = 1.0;
  if (std::isfinite(first)) {
    bool found = false;
    for (int div = 1; div <= 1000 && !found; ++div) {
      span = first / div;
      found = true;
      for (double o : offsets) {
        const double r = o / span;
        if (std::abs(r - std::round(r)) > 1e-9 * std::max(1.0, r)) {
          found = false;
          break;
        }
      }
    }
    if (!found) throw ValidationError("atoms do not lie on a common lattice");
  }

  std::vector<double> step_log_prob;
  std::vector<std::int64_t> steps;
  std::int64_t max_step = 0;
  for (int j = 0; j < dist.size(); ++j) {
    const auto s = static_cast<std::int64_t>(std::llround(offsets[j] / span));
    steps.push_back(s);
    step_log_prob.push_back(std::log(dist.probs()[j]));
    max_step = std::max(max_step, s);
  }

  std::vector<double> cur(1, 0.0);
  for (std::int64_t i = 0; i < n; ++i) {
    std::vector<double> next(cur.size() + static_cast<std::size_t>(max_step),
                             kNegInf<double>);
    for (std::size_t kk = 0; kk < cur.size(); ++kk) {
      if (cur[kk] == kNegInf<double>) continue;
      for (std::size_t j = 0; j < steps.size(); ++j) {
        double& slot = next[kk + static_cast<std::size_t>(steps[j])];
        slot = log_add(slot, cur[kk] + step_log_prob[j]);
      }
    }
    cur = std::move(next);
  }

  const double nd = static_cast<double>(n);
  const double root = std::sqrt(nd);
  const double k_lo = (nd * xi + root * lo - nd * base) / span;
  const double k_hi = (nd * xi + root * hi - nd * base) / span;
  const auto first_k = static_cast<std::int64_t>(
      std::ceil(k_lo - 1e-9 * std::max(1.0, std::abs(k_lo))));
  const auto last_k = static_cast<std::int64_t>(
      std::floor(k_hi + 1e-9 * std::max(1.0, std::abs(k_hi))));
  double acc = kNegInf<double>;
  for (std::int64_t kk = std::max<std::int64_t>(0, first_k);
       kk <= last_k && kk < static_cast<std::int64_t>(cur.size()); ++kk) {
    acc = log_add(acc, cur[static_cast<std::size_t>(kk)]);
  }
  return acc;
}

double exact_tail_oracle(const LatticeDistribution& dist, double xi,
                         double halfwidth, std::int64_t n) {
  return std::exp(
      exact_tail_log_probability(dist, xi, -halfwidth, halfwidth, n));
}

}  // namespace privfit

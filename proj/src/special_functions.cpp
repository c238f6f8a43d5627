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

#include "privfit/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "privfit/errors.hpp"

namespace privfit {
namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxTerms = 100000;

// Leading factor x^a e^{-x} / Gamma(a), in log space.
double log_prefactor(double a, double x) {
  return a * std::log(x) - x - std::lgamma(a);
}

double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxTerms; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(log_prefactor(a, x));
}

// Modified Lentz evaluation of the continued fraction for Q(a, x).
double gamma_q_continued_fraction(double a, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxTerms; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(log_prefactor(a, x)) * h;
}

void check_gamma_args(double a, double x) {
  if (!(a > 0.0) || std::isnan(x)) {
    throw ValidationError("incomplete gamma requires a > 0 and a numeric x");
  }
}

void check_df(int df) {
  if (df < 1) throw ValidationError("chi-squared df must be >= 1");
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  check_gamma_args(a, x);
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_continued_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
  check_gamma_args(a, x);
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_continued_fraction(a, x);
}

double chi2_cdf(double t, int df) {
  check_df(df);
  return regularized_gamma_p(0.5 * df, 0.5 * t);
}

double chi2_sf(double t, int df) {
  check_df(df);
  return regularized_gamma_q(0.5 * df, 0.5 * t);
}

double chi2_pdf(double t, int df) {
  check_df(df);
  if (t < 0.0) return 0.0;
  const double half = 0.5 * df;
  if (t == 0.0) {
    if (df == 1) return std::numeric_limits<double>::infinity();
    return df == 2 ? 0.5 : 0.0;
  }
  return std::exp((half - 1.0) * std::log(t) - 0.5 * t -
                  half * std::log(2.0) - std::lgamma(half));
}

double chi2_quantile(double q, int df) {
  check_df(df);
  if (!(q > 0.0 && q < 1.0)) {
    throw ValidationError("chi-squared quantile level must be in (0, 1)");
  }
  // Solve in whichever tail is smaller to keep relative accuracy.
  const bool upper = q > 0.5;
  const double target = upper ? 1.0 - q : q;
  auto residual = [&](double t) {
    return upper ? target - chi2_sf(t, df) : chi2_cdf(t, df) - target;
  };

  double lo = 0.0;
  double hi = std::max(1.0, static_cast<double>(df));
  while (residual(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
  }
  double t = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double r = residual(t);
    if (r == 0.0) return t;
    if (r < 0.0) {
      lo = t;
    } else {
      hi = t;
    }
    if (std::abs(r) < 1e-15 || hi - lo < 1e-14 * std::max(1.0, t)) return t;
    const double slope = chi2_pdf(t, df);
    double next = slope > 0.0 ? t - r / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    t = next;
  }
  return t;
}

}  // namespace privfit

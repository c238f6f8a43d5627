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

// Regularized incomplete gamma functions and the chi-squared distribution.

#ifndef PRIVFIT_SPECIAL_FUNCTIONS_HPP_
#define PRIVFIT_SPECIAL_FUNCTIONS_HPP_

namespace privfit {

// Lower and upper regularized incomplete gamma P(a, x), Q(a, x) = 1 - P.
// Series expansion for x < a + 1, continued fraction otherwise.
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

// Chi-squared CDF with df degrees of freedom: P(df/2, t/2); 0 for t <= 0.
double chi2_cdf(double t, int df);
// Upper tail 1 - chi2_cdf(t, df), accurate when it is small.
double chi2_sf(double t, int df);
double chi2_pdf(double t, int df);

// t with chi2_cdf(t, df) == q, by Newton iteration kept inside a bracket.
double chi2_quantile(double q, int df);

}  // namespace privfit

#endif  // PRIVFIT_SPECIAL_FUNCTIONS_HPP_

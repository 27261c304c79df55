/*
 * Copyright 2026 The dyadgen Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DYADGEN_SPECIAL_HPP
#define DYADGEN_SPECIAL_HPP

// Differences of log-gamma, digamma and trigamma at x and x + h. Taking the
// difference of two library calls loses every digit once h << x (the
// expected-degree formulas need x up to 1e300), so these work on the
// difference directly: upward recurrence to x >= 20, then the asymptotic
// series term by term with log1p / expm1.

namespace dyadgen::special {

/// lgamma(x + h) - lgamma(x) for x > 0, h >= 0.
double log_gamma_ratio(double x, double h);

/// lgamma(x + delta + h) - lgamma(x + delta) - (lgamma(x + h) - lgamma(x)),
/// accurate even when delta << x. x > 0, delta >= 0, h >= 0.
double log_gamma_ratio_diff(double x, double delta, double h);

/// x * (digamma(x + h) - digamma(x)) for x > 0, h >= 0.
double scaled_digamma_diff(double x, double h);

/// x^2 * (trigamma(x + h) - trigamma(x)) for x > 0, h >= 0.
double scaled_trigamma_diff(double x, double h);

/// digamma(x + h) - digamma(x).
inline double digamma_diff(double x, double h) { return scaled_digamma_diff(x, h) / x; }

}  // namespace dyadgen::special

#endif  // DYADGEN_SPECIAL_HPP

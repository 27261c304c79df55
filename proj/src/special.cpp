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

#include "dyadgen/special.hpp"

#include <cmath>
#include <string>

#include "dyadgen/errors.hpp"

namespace dyadgen::special {

namespace {

constexpr double kAsymptoticFrom = 20.0;

void check_args(double x, double h, const char* who) {
  if (!(x > 0.0) || !(h >= 0.0) || !std::isfinite(x) || !std::isfinite(h))
    throw PreconditionError(std::string(who) + ": need finite x > 0 and h >= 0");
}

// x^p * ((x + h)^-m - x^-m), computed without cancellation.
double scaled_power_diff(double x, double h, int m, int p) {
  return std::pow(x, p - m) * std::expm1(-m * std::log1p(h / x));
}

// log1p(t) - t without cancellation for small t.
double log1p_minus_t(double t) {
  if (std::fabs(t) > 0.1) return std::log1p(t) - t;
  double term = t, sum = 0.0;
  for (int k = 2; k < 40; ++k) {
    term *= -t;
    const double next = term / k;
    sum += next;
    if (std::fabs(next) <= 1e-18 * std::fabs(sum)) break;
  }
  return sum;
}

// lgamma(x + h) - lgamma(x) - h ln x for x >= kAsymptoticFrom, from Stirling:
// (z - 1/2) ln z - z + ln(2 pi)/2 + sum B_2k / (2k (2k-1) z^(2k-1)).
double stirling_excess(double x, double h) {
  static constexpr double kCoef[] = {1.0 / 12, -1.0 / 360, 1.0 / 1260, -1.0 / 1680, 1.0 / 1188};
  const double t = h / x;
  double series = 0.0;
  for (int k = 0; k < 5; ++k) series += kCoef[k] * scaled_power_diff(x, h, 2 * k + 1, 0);
  return x * log1p_minus_t(t) + (h - 0.5) * std::log1p(t) + series;
}

// Shifts x up to the asymptotic range; returns the accumulated correction
// lgamma(x0 + h) - lgamma(x0) - (lgamma(x + h) - lgamma(x)).
double shift_up(double& x, double h) {
  double acc = 0.0;
  // Gamma(x + 1 + h) / Gamma(x + 1) = (x + h) / x * Gamma(x + h) / Gamma(x)
  for (; x < kAsymptoticFrom; x += 1.0) acc -= std::log1p(h / x);
  return acc;
}

}  // namespace

double log_gamma_ratio(double x, double h) {
  check_args(x, h, "log_gamma_ratio");
  if (h == 0.0) return 0.0;
  const double acc = shift_up(x, h);
  return acc + h * std::log(x) + stirling_excess(x, h);
}

double log_gamma_ratio_diff(double x, double delta, double h) {
  check_args(x, h, "log_gamma_ratio_diff");
  if (!(delta >= 0.0) || !std::isfinite(delta))
    throw PreconditionError("log_gamma_ratio_diff: need finite delta >= 0");
  if (h == 0.0 || delta == 0.0) return 0.0;
  if (x < kAsymptoticFrom) return log_gamma_ratio(x + delta, h) - log_gamma_ratio(x, h);
  // Both ends asymptotic: the h ln x parts combine into h log1p(delta / x).
  return h * std::log1p(delta / x) + stirling_excess(x + delta, h) - stirling_excess(x, h);
}

double scaled_digamma_diff(double x, double h) {
  check_args(x, h, "scaled_digamma_diff");
  if (h == 0.0) return 0.0;
  const double x0 = x;
  double acc = 0.0;  // in units of 1, rescaled at the end
  // digamma(x + 1) = digamma(x) + 1 / x
  for (; x < kAsymptoticFrom; x += 1.0) acc += h / (x * (x + h));
  // digamma(z) = ln z - 1/(2z) - 1/(12 z^2) + 1/(120 z^4) - 1/(252 z^6) + ...
  static constexpr double kCoef[] = {-1.0 / 12, 1.0 / 120, -1.0 / 252, 1.0 / 240, -1.0 / 132};
  double tail = std::log1p(h / x) * x - 0.5 * scaled_power_diff(x, h, 1, 1);
  for (int k = 0; k < 5; ++k) tail += kCoef[k] * scaled_power_diff(x, h, 2 * k + 2, 1);
  // tail carries a factor x; bring both parts to the scale of x0.
  return acc * x0 + tail * (x0 / x);
}

double scaled_trigamma_diff(double x, double h) {
  check_args(x, h, "scaled_trigamma_diff");
  if (h == 0.0) return 0.0;
  const double x0 = x;
  double acc = 0.0;
  // trigamma(x) = trigamma(x + 1) + 1 / x^2
  for (; x < kAsymptoticFrom; x += 1.0) acc += scaled_power_diff(x, h, 2, 0);
  // trigamma(z) = 1/z + 1/(2 z^2) + 1/(6 z^3) - 1/(30 z^5) + 1/(42 z^7) - 1/(30 z^9) + 5/(66 z^11)
  static constexpr int kPow[] = {1, 2, 3, 5, 7, 9, 11};
  static constexpr double kCoef[] = {1.0, 0.5, 1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66};
  double tail = 0.0;
  for (int k = 0; k < 7; ++k) tail += kCoef[k] * scaled_power_diff(x, h, kPow[k], 2);
  const double r = x0 / x;
  return acc * x0 * x0 + tail * r * r;
}

}  // namespace dyadgen::special

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

#ifndef DYADGEN_ANALYTICS_HPP
#define DYADGEN_ANALYTICS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dyadgen/network.hpp"

namespace dyadgen {

// ---- theory ---------------------------------------------------------------

enum class Regime { Constant, Logarithmic, Polynomial };

std::string_view regime_name(Regime r);

/// |theta_in + theta_out - 1| within this counts as the critical line.
inline constexpr double kRegimeTolerance = 1e-12;

Regime regime_classify(const ModelParams& params);

/// Large-n law of the average degree. `value` is the limit (Constant), the
/// slope against ln n (Logarithmic) or the exponent rho of n^rho
/// (Polynomial). The latter two carry an undetermined constant.
struct GrowthLaw {
  Regime regime = Regime::Constant;
  double value = 0;

  /// The n-dependent part: value, value * ln n, or n^value.
  double shape(double n) const;
};

GrowthLaw predicted_avg_degree(const ModelParams& params);

/// Tail exponent of the degree distribution; nullopt when the model has no
/// power-law tail (theta_in = 0 below the critical line, theta_out = 1 above
/// it). On the critical line both branches are evaluated and must agree.
std::optional<double> predicted_gamma(const ModelParams& params);

/// Expected in-degree at size n of node j given its out-degree, from the
/// gamma-ratio solution of the in-degree difference equation. j and n are
/// real so the asymptotic window can be probed far beyond sampling sizes.
/// theta_in = 0 uses the digamma limit of the same expression.
/// Throws PreconditionError unless 1 <= j <= n, NumericalError if the result
/// is not finite.
double expected_in_degree(double j, double n, double dout, const ModelParams& params);

/// The same quantity by iterating the difference equation from j to n in
/// extended precision. O(n - j); the oracle for expected_in_degree.
double expected_in_degree_by_recursion(std::uint64_t j, std::uint64_t n, double dout,
                                       const ModelParams& params);

/// Tail exponent implied by the expected total degree curve f(j) at size n:
/// gamma = f f'' / (f')^2, with f(j) = expected_in_degree(j, n, D(j)) + D(j)
/// and D(j) the regime's out-degree law (alpha / (1 - theta), alpha ln j, or
/// j^rho with unit prefactor). Derivatives are analytic, via digamma and
/// trigamma differences. Needs 1 << j << n.
double exponent_from_expected_degree(const ModelParams& params, double j, double n);

// ---- empirical ------------------------------------------------------------

struct DegreeStats {
  NodeIndex n = 0;
  std::uint64_t edges = 0;
  std::vector<std::uint32_t> degrees;     // degrees[i - 1] is node i's degree
  std::vector<std::uint64_t> histogram;   // histogram[d] nodes of degree d
  std::vector<double> ccdf;               // ccdf[d] = P(D >= d)
  double avg_degree = 0;
};

DegreeStats degree_stats(const GrowingNetwork& net);

struct TailFit {
  double gamma = 0;
  double std_error = 0;
  std::uint32_t dmin = 0;
  std::size_t tail_count = 0;
};

inline constexpr std::size_t kMinTailCount = 100;
inline constexpr double kDefaultTailFraction = 0.1;

/// Discrete Hill-type maximum likelihood estimate over degrees >= dmin:
/// gamma = 1 + m / sum ln(d / (dmin - 1/2)), std_error = (gamma - 1) / sqrt(m).
/// Throws PreconditionError if dmin < 1, fewer than kMinTailCount degrees
/// reach dmin, or every tail degree is the same.
TailFit fit_tail_exponent(std::span<const std::uint32_t> degrees, std::uint32_t dmin);

/// The smallest degree among the top `fraction` of the sample.
std::uint32_t tail_threshold(std::span<const std::uint32_t> degrees,
                             double fraction = kDefaultTailFraction);

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double slope_std_error = 0;
  std::size_t points = 0;
};

/// Ordinary least squares y = intercept + slope x. Needs two distinct x.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

struct CurvePoint {
  NodeIndex n = 0;
  std::uint64_t edges = 0;
  double avg_degree = 0;  // 2 E(n) / n
};

/// Average degree of the subnetwork on nodes 1..n at each checkpoint, from a
/// single sequential growth run up to checkpoints.back().
std::vector<CurvePoint> avg_degree_curve(const ModelParams& params, const RandomSource& rng,
                                         std::span<const NodeIndex> checkpoints);

/// Same curve read off an existing network (edges are ordered by arrival).
std::vector<CurvePoint> avg_degree_curve(const GrowingNetwork& net,
                                         std::span<const NodeIndex> checkpoints);

/// Roughly `per_decade` log-spaced sizes in [first, last], both included.
std::vector<NodeIndex> log_checkpoints(NodeIndex first, NodeIndex last, unsigned per_decade = 10);

struct RegimeReport {
  Regime regime = Regime::Constant;
  GrowthLaw predicted_growth;
  std::optional<double> predicted_gamma;
  double avg_degree = 0;
  /// Constant: average degree at n. Logarithmic: slope of <d> on ln n.
  /// Polynomial: slope of ln E on ln n, minus one.
  std::optional<double> fitted_growth;
  std::optional<double> fitted_growth_std_error;
  std::optional<TailFit> fitted_tail;
};

/// Compares a network with the predictions for `params`. The growth fit uses
/// the curve points with n >= n_max / 100 (logarithmic) or n >= n_max / 10
/// (polynomial); the tail fit uses the top decile and is skipped when it has
/// fewer than kMinTailCount points.
RegimeReport regime_report(const ModelParams& params, const DegreeStats& stats,
                           std::span<const CurvePoint> curve);

// CSV emitters. Doubles are written in shortest round-trip form.
void write_degree_hist_csv(std::ostream& os, const DegreeStats& stats);
void write_ccdf_csv(std::ostream& os, const DegreeStats& stats);
void write_avg_degree_csv(std::ostream& os, std::span<const CurvePoint> curve);
void write_regime_report_csv(std::ostream& os, const RegimeReport& report);

}  // namespace dyadgen

#endif  // DYADGEN_ANALYTICS_HPP

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

#include "dyadgen/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "dyadgen/errors.hpp"
#include "dyadgen/format.hpp"
#include "dyadgen/special.hpp"

namespace dyadgen {

std::string_view regime_name(Regime r) {
  switch (r) {
    case Regime::Constant: return "constant";
    case Regime::Logarithmic: return "logarithmic";
    case Regime::Polynomial: return "polynomial";
  }
  return "?";
}

Regime regime_classify(const ModelParams& params) {
  params.validate();
  const double s = params.theta_sum();
  if (std::fabs(s - 1.0) <= kRegimeTolerance) return Regime::Logarithmic;
  return s < 1.0 ? Regime::Constant : Regime::Polynomial;
}

double GrowthLaw::shape(double n) const {
  switch (regime) {
    case Regime::Constant: return value;
    case Regime::Logarithmic: return value * std::log(n);
    case Regime::Polynomial: return std::pow(n, value);
  }
  return 0;
}

GrowthLaw predicted_avg_degree(const ModelParams& params) {
  const Regime r = regime_classify(params);
  switch (r) {
    case Regime::Constant: return {r, 2.0 * params.alpha / (1.0 - params.theta_sum())};
    case Regime::Logarithmic: return {r, 2.0 * params.alpha};
    case Regime::Polynomial: return {r, params.theta_sum() - 1.0};
  }
  return {};
}

std::optional<double> predicted_gamma(const ModelParams& params) {
  const Regime r = regime_classify(params);
  const double ti = params.theta_in, to = params.theta_out;
  const std::optional<double> in_branch =
      ti > 0.0 ? std::optional<double>((1.0 + ti) / ti) : std::nullopt;
  const std::optional<double> out_branch =
      to < 1.0 ? std::optional<double>((2.0 - to) / (1.0 - to)) : std::nullopt;
  switch (r) {
    case Regime::Constant: return in_branch;
    case Regime::Polynomial: return out_branch;
    case Regime::Logarithmic: break;
  }
  if (!in_branch || !out_branch) return std::nullopt;
  // Off the exact line by |s - 1| the branches drift apart at the rate of
  // d gamma / d theta_in = -1 / theta_in^2.
  const double drift = std::fabs(params.theta_sum() - 1.0) / (ti * (1.0 - to));
  const double tol = 1e-12 * std::max(1.0, *in_branch) + 2.0 * drift;
  if (std::fabs(*in_branch - *out_branch) > tol)
    throw NumericalError("predicted_gamma: branches disagree on the critical line (" +
                         format_double(*in_branch) + " vs " + format_double(*out_branch) + ")");
  return in_branch;
}

namespace {

void check_window(double j, double n, double dout, const char* who) {
  if (!std::isfinite(j) || !std::isfinite(n) || !(j >= 1.0) || !(n >= j))
    throw PreconditionError(std::string(who) + ": need 1 <= j <= n");
  if (!std::isfinite(dout) || !(dout >= 0.0))
    throw PreconditionError(std::string(who) + ": need dout >= 0");
}

}  // namespace

double expected_in_degree(double j, double n, double dout, const ModelParams& params) {
  params.validate();
  check_window(j, n, dout, "expected_in_degree");
  if (n == j) return 0.0;
  const double a = params.alpha + params.beta - 1.0;
  const double c = params.alpha + params.theta_out * dout;
  const double theta = params.theta_in;
  double value;
  if (theta == 0.0) {
    value = c * special::digamma_diff(a + j, n - j);
  } else {
    value = c / theta * std::expm1(special::log_gamma_ratio_diff(a + j, n - j, theta));
  }
  if (!std::isfinite(value)) throw NumericalError("expected_in_degree: result is not finite");
  return value;
}

double expected_in_degree_by_recursion(std::uint64_t j, std::uint64_t n, double dout,
                                       const ModelParams& params) {
  params.validate();
  check_window(static_cast<double>(j), static_cast<double>(n), dout,
               "expected_in_degree_by_recursion");
  const long double base = static_cast<long double>(params.alpha) +
                           static_cast<long double>(params.theta_out) * dout;
  const long double theta = params.theta_in;
  const long double shift = static_cast<long double>(params.alpha) + params.beta - 1.0L;
  long double d = 0.0L;
  for (std::uint64_t m = j; m < n; ++m) d += (base + theta * d) / (static_cast<long double>(m) + shift);
  return static_cast<double>(d);
}

double exponent_from_expected_degree(const ModelParams& params, double j, double n) {
  params.validate();
  check_window(j, n, 0.0, "exponent_from_expected_degree");
  const double theta = params.theta_in;
  if (!(theta > 0.0))
    throw PreconditionError("exponent_from_expected_degree: needs theta_in > 0");

  // Out-degree law D(j) and its scaled derivatives j D', j^2 D''.
  double D = 0, d1 = 0, d2 = 0;
  switch (regime_classify(params)) {
    case Regime::Constant:
      D = params.alpha / (1.0 - params.theta_sum());
      break;
    case Regime::Logarithmic:
      D = params.alpha * std::log(j);
      d1 = params.alpha;
      d2 = -params.alpha;
      break;
    case Regime::Polynomial: {
      const double rho = params.theta_sum() - 1.0;
      D = std::pow(j, rho);
      d1 = rho * D;
      d2 = rho * (rho - 1.0) * D;
      break;
    }
  }

  // f(j) = c(j) (E(j) - 1) / theta + D(j), with c = alpha + theta_out D and
  // E = Gamma(a + j) Gamma(a + theta + n) / (Gamma(a + theta + j) Gamma(a + n)).
  // ln E has j-derivatives digamma(x) - digamma(x + theta) and
  // trigamma(x) - trigamma(x + theta) at x = a + j. Everything is carried as
  // j^k times the k-th derivative so nothing underflows at j ~ 1e200.
  const double a = params.alpha + params.beta - 1.0;
  const double x = a + j;
  const double r = j / x;
  const double g1 = -r * special::scaled_digamma_diff(x, theta);
  const double g2 = -r * r * special::scaled_trigamma_diff(x, theta);
  const double log_e = special::log_gamma_ratio_diff(x, n - j, theta);
  const double e = std::exp(log_e);
  const double p = std::expm1(log_e);

  const double c = params.alpha + params.theta_out * D;
  const double c1 = params.theta_out * d1;
  const double c2 = params.theta_out * d2;

  const double f = c * p / theta + D;
  const double f1 = (c1 * p + c * e * g1) / theta + d1;
  const double f2 = (c2 * p + 2.0 * c1 * e * g1 + c * e * (g1 * g1 + g2)) / theta + d2;
  const double gamma = f * f2 / (f1 * f1);
  if (!std::isfinite(gamma))
    throw NumericalError("exponent_from_expected_degree: result is not finite");
  return gamma;
}

DegreeStats degree_stats(const GrowingNetwork& net) {
  DegreeStats s;
  s.n = net.node_count();
  s.edges = net.edge_count();
  s.degrees.resize(s.n);
  std::uint32_t max_degree = 0;
  for (NodeIndex i = 1; i <= s.n; ++i) {
    s.degrees[i - 1] = net.degree(i);
    max_degree = std::max(max_degree, s.degrees[i - 1]);
  }
  s.histogram.assign(static_cast<std::size_t>(max_degree) + 1, 0);
  for (std::uint32_t d : s.degrees) ++s.histogram[d];
  s.ccdf.assign(s.histogram.size(), 0.0);
  std::uint64_t at_least = 0;
  for (std::size_t d = s.histogram.size(); d-- > 0;) {
    at_least += s.histogram[d];
    s.ccdf[d] = s.n ? static_cast<double>(at_least) / s.n : 0.0;
  }
  s.avg_degree = s.n ? 2.0 * static_cast<double>(s.edges) / s.n : 0.0;
  return s;
}

TailFit fit_tail_exponent(std::span<const std::uint32_t> degrees, std::uint32_t dmin) {
  if (dmin < 1) throw PreconditionError("fit_tail_exponent: dmin must be >= 1");
  const double shift = dmin - 0.5;
  double log_sum = 0.0;
  std::size_t m = 0;
  bool spread = false;
  std::uint32_t first = 0;
  for (std::uint32_t d : degrees) {
    if (d < dmin) continue;
    if (m == 0) first = d;
    spread |= d != first;
    log_sum += std::log(d / shift);
    ++m;
  }
  if (m < kMinTailCount)
    throw PreconditionError("fit_tail_exponent: " + std::to_string(m) + " degrees >= " +
                            std::to_string(dmin) + ", need at least " +
                            std::to_string(kMinTailCount));
  if (!spread)
    throw PreconditionError("fit_tail_exponent: all tail degrees are equal, no exponent to fit");
  TailFit fit;
  fit.gamma = 1.0 + static_cast<double>(m) / log_sum;
  fit.std_error = (fit.gamma - 1.0) / std::sqrt(static_cast<double>(m));
  fit.dmin = dmin;
  fit.tail_count = m;
  return fit;
}

std::uint32_t tail_threshold(std::span<const std::uint32_t> degrees, double fraction) {
  if (degrees.empty()) throw PreconditionError("tail_threshold: empty sample");
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw PreconditionError("tail_threshold: fraction must lie in (0, 1]");
  std::vector<std::uint32_t> sorted(degrees.begin(), degrees.end());
  const auto k = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(sorted.size()))));
  std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end(), std::greater<>());
  return sorted[k - 1];
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw PreconditionError("fit_line: x and y differ in length");
  const std::size_t m = x.size();
  if (m < 2) throw PreconditionError("fit_line: need at least two points");
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < m; ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= m;
  my /= m;
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < m; ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  if (!(sxx > 0.0)) throw PreconditionError("fit_line: x values are all equal");
  LinearFit fit;
  fit.points = m;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (m > 2) {
    double ssr = 0;
    for (std::size_t k = 0; k < m; ++k) {
      const double res = y[k] - fit.intercept - fit.slope * x[k];
      ssr += res * res;
    }
    fit.slope_std_error = std::sqrt(ssr / static_cast<double>(m - 2) / sxx);
  }
  return fit;
}

namespace {

void check_checkpoints(std::span<const NodeIndex> checkpoints, NodeIndex limit) {
  if (checkpoints.empty()) throw PreconditionError("avg_degree_curve: no checkpoints");
  if (checkpoints.front() < 1) throw PreconditionError("avg_degree_curve: checkpoints start at 1");
  for (std::size_t k = 1; k < checkpoints.size(); ++k)
    if (checkpoints[k] <= checkpoints[k - 1])
      throw PreconditionError("avg_degree_curve: checkpoints must increase");
  if (checkpoints.back() > limit)
    throw PreconditionError("avg_degree_curve: checkpoint beyond the network size");
}

CurvePoint make_point(NodeIndex n, std::uint64_t edges) {
  return {n, edges, 2.0 * static_cast<double>(edges) / n};
}

}  // namespace

std::vector<CurvePoint> avg_degree_curve(const ModelParams& params, const RandomSource& rng,
                                         std::span<const NodeIndex> checkpoints) {
  check_checkpoints(checkpoints, checkpoints.empty() ? 0 : checkpoints.back());
  std::vector<CurvePoint> curve;
  curve.reserve(checkpoints.size());
  std::size_t next = 0;
  auto observe = [&](NodeIndex j, std::uint64_t edges) {
    if (next < checkpoints.size() && checkpoints[next] == j) {
      curve.push_back(make_point(j, edges));
      ++next;
    }
  };
  if (checkpoints.back() < 2) {
    curve.push_back(make_point(1, 0));
    return curve;
  }
  sample_sequential(params, checkpoints.back(), rng, observe);
  return curve;
}

std::vector<CurvePoint> avg_degree_curve(const GrowingNetwork& net,
                                         std::span<const NodeIndex> checkpoints) {
  check_checkpoints(checkpoints, net.node_count());
  std::vector<CurvePoint> curve;
  curve.reserve(checkpoints.size());
  std::uint64_t edges = 0;
  NodeIndex j = 0;
  for (NodeIndex target : checkpoints) {
    while (j < target) edges += net.column(++j).size();
    curve.push_back(make_point(target, edges));
  }
  return curve;
}

std::vector<NodeIndex> log_checkpoints(NodeIndex first, NodeIndex last, unsigned per_decade) {
  if (first < 1 || last < first || per_decade == 0)
    throw PreconditionError("log_checkpoints: need 1 <= first <= last and per_decade >= 1");
  std::vector<NodeIndex> out;
  const double span = std::log10(static_cast<double>(last) / first);
  const auto steps = static_cast<unsigned>(std::ceil(span * per_decade - 1e-9));
  for (unsigned k = 0; k <= steps; ++k) {
    const double v = first * std::pow(10.0, static_cast<double>(k) / per_decade);
    const auto node = static_cast<NodeIndex>(std::min<double>(std::llround(v), last));
    if (out.empty() || node > out.back()) out.push_back(node);
  }
  if (out.back() != last) out.push_back(last);
  return out;
}

RegimeReport regime_report(const ModelParams& params, const DegreeStats& stats,
                           std::span<const CurvePoint> curve) {
  RegimeReport rep;
  rep.regime = regime_classify(params);
  rep.predicted_growth = predicted_avg_degree(params);
  rep.predicted_gamma = predicted_gamma(params);
  rep.avg_degree = stats.avg_degree;

  const NodeIndex n_max = curve.empty() ? 0 : curve.back().n;
  std::vector<double> x, y;
  switch (rep.regime) {
    case Regime::Constant:
      if (stats.n > 0) rep.fitted_growth = stats.avg_degree;
      break;
    case Regime::Logarithmic:
      for (const auto& pt : curve) {
        if (pt.n < std::max<NodeIndex>(2, n_max / 100)) continue;
        x.push_back(std::log(static_cast<double>(pt.n)));
        y.push_back(pt.avg_degree);
      }
      break;
    case Regime::Polynomial:
      for (const auto& pt : curve) {
        if (pt.n < std::max<NodeIndex>(2, n_max / 10) || pt.edges == 0) continue;
        x.push_back(std::log(static_cast<double>(pt.n)));
        y.push_back(std::log(static_cast<double>(pt.edges)));
      }
      break;
  }
  if (x.size() >= 3) {
    const LinearFit fit = fit_line(x, y);
    rep.fitted_growth = rep.regime == Regime::Polynomial ? fit.slope - 1.0 : fit.slope;
    rep.fitted_growth_std_error = fit.slope_std_error;
  }

  if (!stats.degrees.empty()) {
    const std::uint32_t dmin = tail_threshold(stats.degrees);
    if (dmin >= 1) {
      try {
        rep.fitted_tail = fit_tail_exponent(stats.degrees, dmin);
      } catch (const PreconditionError&) {
        // Too small or degenerate tail: reported as absent.
      }
    }
  }
  return rep;
}

void write_degree_hist_csv(std::ostream& os, const DegreeStats& stats) {
  os << "degree,count\n";
  for (std::size_t d = 0; d < stats.histogram.size(); ++d)
    if (stats.histogram[d]) os << d << ',' << stats.histogram[d] << '\n';
}

void write_ccdf_csv(std::ostream& os, const DegreeStats& stats) {
  os << "degree,ccdf\n";
  for (std::size_t d = 0; d < stats.histogram.size(); ++d)
    if (stats.histogram[d]) os << d << ',' << format_double(stats.ccdf[d]) << '\n';
}

void write_avg_degree_csv(std::ostream& os, std::span<const CurvePoint> curve) {
  os << "n,avg\n";
  for (const auto& pt : curve) os << pt.n << ',' << format_double(pt.avg_degree) << '\n';
}

void write_regime_report_csv(std::ostream& os, const RegimeReport& rep) {
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  os << "quantity,predicted,fitted,std_error\n";
  os << "regime," << regime_name(rep.regime) << ",,\n";
  const char* growth = rep.regime == Regime::Constant      ? "avg_degree_limit"
                       : rep.regime == Regime::Logarithmic ? "avg_degree_slope_per_ln_n"
                                                           : "avg_degree_exponent_rho";
  os << growth << ',' << format_double(rep.predicted_growth.value) << ',' << opt(rep.fitted_growth)
     << ',' << opt(rep.fitted_growth_std_error) << '\n';
  os << "gamma," << (rep.predicted_gamma ? format_double(*rep.predicted_gamma) : "none") << ',';
  if (rep.fitted_tail)
    os << format_double(rep.fitted_tail->gamma) << ',' << format_double(rep.fitted_tail->std_error);
  else
    os << ',';
  os << '\n';
  os << "tail_dmin,," << (rep.fitted_tail ? std::to_string(rep.fitted_tail->dmin) : "") << ",\n";
  os << "tail_count,," << (rep.fitted_tail ? std::to_string(rep.fitted_tail->tail_count) : "")
     << ",\n";
  os << "avg_degree,," << format_double(rep.avg_degree) << ",\n";
}

}  // namespace dyadgen

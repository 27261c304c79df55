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


#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "dyadgen/analytics.hpp"
#include "dyadgen/errors.hpp"
#include "dyadgen/io.hpp"
#include "test_support.hpp"

using namespace dyadgen;

namespace {

// Plain double iteration of the in-degree difference equation.
double naive_in_degree(int j, int n, double dout, const ModelParams& p) {
  double d = 0;
  for (int m = j + 1; m <= n; ++m)
    d += (p.alpha + p.theta_in * d + p.theta_out * dout) / (m - 2 + p.alpha + p.beta);
  return d;
}

// Gamma-ratio solution evaluated with std::lgamma; fine at small sizes.
double lgamma_in_degree(double j, double n, double dout, const ModelParams& p) {
  const double a = p.alpha + p.beta, t = p.theta_in;
  const double ratio = std::lgamma(a + j - 1) - std::lgamma(a + t + j - 1) +
                       std::lgamma(a + t + n - 1) - std::lgamma(a + n - 1);
  return (p.alpha + p.theta_out * dout) / t * std::expm1(ratio);
}

std::string csv(void (*writer)(std::ostream&, const DegreeStats&), const DegreeStats& s) {
  std::ostringstream os;
  writer(os, s);
  return os.str();
}

}  // namespace

TEST_CASE("regime classification") {
  CHECK(regime_classify({1, 1, 0.25, 0.25}) == Regime::Constant);
  CHECK(regime_classify({1, 1, 0.5, 0.5}) == Regime::Logarithmic);
  CHECK(regime_classify({1, 1, 0.3, 0.7}) == Regime::Logarithmic);
  CHECK(regime_classify({1, 1, 0.6, 0.6}) == Regime::Polynomial);
  CHECK(regime_classify({1, 1, 0.0, 0.0}) == Regime::Constant);
  CHECK(regime_classify({1, 1, 0.5, 0.5 - 1e-14}) == Regime::Logarithmic);
  CHECK(regime_classify({1, 1, 0.5, 0.5 - 1e-9}) == Regime::Constant);
  CHECK(regime_name(Regime::Polynomial) == "polynomial");
}

TEST_CASE("predicted growth laws") {
  const auto c = predicted_avg_degree({1, 1, 0.25, 0.25});
  CHECK(c.regime == Regime::Constant);
  CHECK(c.value == doctest::Approx(4.0));
  CHECK(predicted_avg_degree({2.5, 0, 0.5, 0.25}).value == doctest::Approx(20.0));
  const auto l = predicted_avg_degree({1.5, 1, 0.5, 0.5});
  CHECK(l.regime == Regime::Logarithmic);
  CHECK(l.value == doctest::Approx(3.0));
  CHECK(l.shape(std::exp(2.0)) == doctest::Approx(6.0));
  const auto q = predicted_avg_degree({1, 1, 0.6, 0.6});
  CHECK(q.regime == Regime::Polynomial);
  CHECK(q.value == doctest::Approx(0.2));
}

TEST_CASE("predicted tail exponents") {
  CHECK(*predicted_gamma({1, 1, 0.5, 0.25}) == doctest::Approx(3.0));
  CHECK(*predicted_gamma({1, 1, 0.6, 0.6}) == doctest::Approx(3.5));
  CHECK(*predicted_gamma({1, 1, 0.25, 0.25}) == doctest::Approx(5.0));
  // On the critical line the two branches coincide.
  CHECK(*predicted_gamma({1, 1, 0.4, 0.6}) == doctest::Approx(3.5));
  CHECK_FALSE(predicted_gamma({1, 1, 0.0, 0.5}));
  CHECK_FALSE(predicted_gamma({1, 1, 0.5, 1.0}));
}

TEST_CASE("closed-form in-degree against two independent evaluations") {
  for (const ModelParams& p : {ModelParams{1, 1, 0.5, 0.25}, ModelParams{0.5, 4, 0.9, 0.6},
                               ModelParams{3, 0, 0.1, 1.0}, ModelParams{1, 1, 1.0, 0.0}}) {
    for (int j : {1, 2, 7, 50}) {
      for (int n : {j, j + 1, j + 30, 3000}) {
        for (double dout : {0.0, 2.0}) {
          if (dout > j - 1) continue;
          const double got = expected_in_degree(j, n, dout, p);
          CHECK(got == doctest::Approx(naive_in_degree(j, n, dout, p)).epsilon(1e-11));
          CHECK(got == doctest::Approx(expected_in_degree_by_recursion(j, n, dout, p)).epsilon(1e-12));
          if (n > j) CHECK(got == doctest::Approx(lgamma_in_degree(j, n, dout, p)).epsilon(1e-8));
        }
      }
    }
  }
}

TEST_CASE("closed-form in-degree without in-degree feedback") {
  // theta_in = 0 sums (alpha + theta_out dout) / (m - 2 + alpha + beta).
  const ModelParams p{1.0, 1.0, 0.0, 0.5};
  CHECK(expected_in_degree(10, 1000, 3, p) ==
        doctest::Approx(naive_in_degree(10, 1000, 3, p)).epsilon(1e-12));
  const ModelParams tiny{1.0, 1.0, 1e-9, 0.5};
  CHECK(expected_in_degree(10, 1000, 3, tiny) ==
        doctest::Approx(naive_in_degree(10, 1000, 3, tiny)).epsilon(1e-10));
  CHECK_THROWS_AS(expected_in_degree(5, 4, 0, p), PreconditionError);
  CHECK_THROWS_AS(expected_in_degree(0.5, 4, 0, p), PreconditionError);
}

TEST_CASE("closed-form in-degree stays finite far out") {
  const ModelParams p{1, 1, 0.5, 0.5};
  const double d = expected_in_degree(1e200, 1e300, 0, p);
  CHECK(std::isfinite(d));
  CHECK(d > 0);
}

TEST_CASE("exponent from the expected-degree curve") {
  CHECK(exponent_from_expected_degree({1, 1, 0.5, 0.25}, 1e6, 1e18) ==
        doctest::Approx(3.0).epsilon(0.01));
  CHECK(exponent_from_expected_degree({1, 1, 0.6, 0.6}, 1e12, 1e30) ==
        doctest::Approx(3.5).epsilon(0.01));
  CHECK(exponent_from_expected_degree({1, 1, 0.5, 0.5}, 1e200, 1e300) ==
        doctest::Approx(3.0).epsilon(0.01));
  CHECK_THROWS_AS(exponent_from_expected_degree({1, 1, 0.0, 0.5}, 1e6, 1e18), PreconditionError);
}

TEST_CASE("Hill estimate recovers a synthetic exponent") {
  // Discrete power law with gamma = 3 above d = 10 by the continuous
  // approximation x = (dmin - 1/2) u^(-1/(gamma - 1)), rounded.
  std::mt19937_64 gen(12345);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double gamma = 3.0;
  const std::uint32_t dmin = 10;
  std::vector<std::uint32_t> degrees;
  for (int k = 0; k < 100000; ++k) {
    const double u = 1.0 - unif(gen);
    const double x = (dmin - 0.5) * std::pow(u, -1.0 / (gamma - 1.0));
    degrees.push_back(static_cast<std::uint32_t>(std::min(x + 0.5, 4e9)));
  }
  const TailFit fit = fit_tail_exponent(degrees, dmin);
  CHECK(fit.tail_count == degrees.size());
  CHECK(fit.gamma == doctest::Approx(gamma).epsilon(0.02 / 3));
  CHECK(fit.std_error == doctest::Approx((fit.gamma - 1) / std::sqrt(1e5)));
}

TEST_CASE("tail fit preconditions") {
  std::vector<std::uint32_t> few(98, 5);
  few.push_back(6);
  CHECK_THROWS_AS(fit_tail_exponent(few, 5), PreconditionError);
  std::vector<std::uint32_t> flat(500, 7);
  CHECK_THROWS_AS(fit_tail_exponent(flat, 7), PreconditionError);
  CHECK_THROWS_AS(fit_tail_exponent(flat, 0), PreconditionError);
}

TEST_CASE("tail threshold takes the top decile") {
  std::vector<std::uint32_t> d;
  for (std::uint32_t k = 1; k <= 1000; ++k) d.push_back(k);
  CHECK(tail_threshold(d) == 901);
  CHECK(tail_threshold(d, 1.0) == 1);
  CHECK(tail_threshold(d, 0.001) == 1000);
  CHECK_THROWS_AS(tail_threshold(d, 0.0), PreconditionError);
  CHECK_THROWS_AS(tail_threshold(std::vector<std::uint32_t>{}), PreconditionError);
}

TEST_CASE("least-squares line") {
  const std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9};
  const LinearFit fit = fit_line(x, y);
  CHECK(fit.slope == doctest::Approx(2.0));
  CHECK(fit.intercept == doctest::Approx(1.0));
  CHECK(fit.slope_std_error == doctest::Approx(0.0));
  CHECK(fit.points == 4);
  const std::vector<double> noisy{3, 5.5, 6.5, 9};
  // By hand: Sxx = 5, Sxy = 9.5.
  CHECK(fit_line(x, noisy).slope == doctest::Approx(1.9));
  CHECK_THROWS_AS(fit_line(std::vector<double>{1}, std::vector<double>{1}), PreconditionError);
  CHECK_THROWS_AS(fit_line(std::vector<double>{1, 1}, std::vector<double>{1, 2}), PreconditionError);
}

TEST_CASE("log checkpoints") {
  const auto c = log_checkpoints(1000, 100000, 10);
  CHECK(c.size() == 21);
  CHECK(c.front() == 1000);
  CHECK(c.back() == 100000);
  CHECK(c[10] == 10000);
  for (std::size_t k = 1; k < c.size(); ++k) CHECK(c[k] > c[k - 1]);
  CHECK(log_checkpoints(1, 1) == std::vector<NodeIndex>{1});
  CHECK(log_checkpoints(1, 3, 10) == std::vector<NodeIndex>{1, 2, 3});
  CHECK_THROWS_AS(log_checkpoints(0, 10), PreconditionError);
}

TEST_CASE("degree statistics of a small network") {
  GrowingNetwork net(5);
  net.add_edge(1, 2);
  net.add_edge(1, 3);
  net.add_edge(2, 3);
  net.add_edge(1, 5);
  const DegreeStats s = degree_stats(net);
  CHECK(s.degrees == std::vector<std::uint32_t>{3, 2, 2, 0, 1});
  CHECK(s.histogram == std::vector<std::uint64_t>{1, 1, 2, 1});
  CHECK(s.ccdf == std::vector<double>{1.0, 0.8, 0.6, 0.2});
  CHECK(s.avg_degree == doctest::Approx(1.6));
  CHECK(csv(write_degree_hist_csv, s) == "degree,count\n0,1\n1,1\n2,2\n3,1\n");
  CHECK(csv(write_ccdf_csv, s) == "degree,ccdf\n0,1\n1,0.8\n2,0.6\n3,0.2\n");
}

TEST_CASE("average-degree curve from a run and from its network agree") {
  const ModelParams p{1, 1, 0.5, 0.5};
  const RandomSource rng(8);
  const auto checkpoints = log_checkpoints(10, 3000, 5);
  const auto from_run = avg_degree_curve(p, rng, checkpoints);
  const auto net = sample_sequential(p, 3000, rng);
  const auto from_net = avg_degree_curve(net, checkpoints);
  REQUIRE(from_run.size() == from_net.size());
  for (std::size_t k = 0; k < from_run.size(); ++k) {
    CHECK(from_run[k].n == from_net[k].n);
    CHECK(from_run[k].edges == from_net[k].edges);
    CHECK(from_run[k].avg_degree == 2.0 * from_run[k].edges / from_run[k].n);
  }
  CHECK(from_net.back().edges == net.edge_count());
}

TEST_CASE("regime report on an empty network") {
  const GrowingNetwork net(10);
  const DegreeStats s = degree_stats(net);
  const auto curve = avg_degree_curve(net, log_checkpoints(1, 10));
  const RegimeReport r = regime_report({1, 1, 0.25, 0.25}, s, curve);
  CHECK(r.avg_degree == 0.0);
  CHECK_FALSE(r.fitted_tail);
  CHECK(*r.predicted_gamma == doctest::Approx(5.0));
}

TEST_CASE("golden analysis CSVs") {
  const auto file = read_network_file(test_data("golden_dapa_n64.net"));
  const DegreeStats s = degree_stats(file.network);
  const auto curve = avg_degree_curve(file.network, log_checkpoints(1, file.header.n, 10));
  const RegimeReport r = regime_report(file.header.params, s, curve);
  std::ostringstream hist, ccdf, avg, report;
  write_degree_hist_csv(hist, s);
  write_ccdf_csv(ccdf, s);
  write_avg_degree_csv(avg, curve);
  write_regime_report_csv(report, r);
  CHECK(hist.str() == read_text(test_data("golden_dapa_n64.degree_hist.csv")));
  CHECK(ccdf.str() == read_text(test_data("golden_dapa_n64.ccdf.csv")));
  CHECK(avg.str() == read_text(test_data("golden_dapa_n64.avg_degree.csv")));
  CHECK(report.str() == read_text(test_data("golden_dapa_n64.regime_report.csv")));
  CHECK(report.str().find("gamma,3,") != std::string::npos);
}

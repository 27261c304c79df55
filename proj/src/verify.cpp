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

#include "dyadgen/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <boost/math/special_functions/gamma.hpp>

#include "dyadgen/analytics.hpp"
#include "dyadgen/dorpa.hpp"
#include "dyadgen/format.hpp"
#include "dyadgen/io.hpp"
#include "dyadgen/network.hpp"

namespace dyadgen {

namespace {

using Clock = std::chrono::steady_clock;

// Runs f(0..count-1) on up to `threads` threads. f must only write to its
// own slot, so the outcome does not depend on the thread count.
template <class F>
void for_each_index(std::size_t count, unsigned threads, F&& f) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t k = 0; k < count; ++k) f(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(threads, count); ++t) {
      pool.emplace_back([&] {
        for (std::size_t k; (k = next.fetch_add(1)) < count;) {
          try {
            f(k);
          } catch (...) {
            std::lock_guard lock(mu);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::string fmt(double v, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

struct Timer {
  Clock::time_point start = Clock::now();
  double seconds() const { return std::chrono::duration<double>(Clock::now() - start).count(); }
};

CriterionResult finish(int id, std::string title, bool passed, std::string detail,
                       const Timer& timer) {
  return {id, std::move(title), passed, std::move(detail), timer.seconds()};
}

bool full(VerifyLevel level) { return level == VerifyLevel::Full; }

ArrowSet closure_of(ArrowSet s, const CompositionTable& table) {
  return transitive_closure(s, table).without(ArrowType::Self);
}

// Mean over seeds of the average-degree curve at the given checkpoints.
std::vector<CurvePoint> mean_curve(const ModelParams& params, std::span<const NodeIndex> checkpoints,
                                   std::size_t seeds, std::uint64_t seed0, unsigned threads) {
  std::vector<std::vector<CurvePoint>> runs(seeds);
  for_each_index(seeds, threads, [&](std::size_t s) {
    runs[s] = avg_degree_curve(params, RandomSource(seed0 + s), checkpoints);
  });
  std::vector<CurvePoint> mean(checkpoints.size());
  for (std::size_t k = 0; k < checkpoints.size(); ++k) {
    double edges = 0;
    for (const auto& run : runs) edges += static_cast<double>(run[k].edges);
    edges /= static_cast<double>(seeds);
    mean[k].n = checkpoints[k];
    mean[k].edges = static_cast<std::uint64_t>(std::llround(edges));
    mean[k].avg_degree = 2.0 * edges / checkpoints[k];
  }
  return mean;
}

}  // namespace

std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.passed ? "PASS" : "FAIL") << "  C" << r.id << "  " << r.title << "  ("
     << fmt(r.seconds, 3) << " s)  " << r.detail;
  return os.str();
}

CriterionResult check_enumeration_counts(const CompositionTable& table) {
  const Timer timer;
  const auto all = enumerate_deletion_invariant();
  const auto closed = enumerate_closed_classes(table);
  std::set<ArrowSet> class_sets;
  for (const auto& c : closed) class_sets.insert(c.arrows);
  std::set<ArrowSet> hit;
  bool all_land = true;
  for (const auto& c : all) {
    const ArrowSet cl = closure_of(c.arrows, table);
    if (!class_sets.count(cl)) all_land = false;
    hit.insert(cl);
  }
  const double secs = timer.seconds();
  const bool ok = all.size() == 96 && closed.size() == 21 && all_land &&
                  hit.size() == class_sets.size() && secs < tolerance::kEnumerationSeconds;
  return finish(1, "enumeration counts", ok,
                std::to_string(all.size()) + " deletion-invariant sets (want 96), " +
                    std::to_string(closed.size()) + " closed classes (want 21), " +
                    (all_land ? "every closure is a listed class" : "some closure is unlisted") +
                    ", " + fmt(secs, 3) + " s (limit 1 s)",
                timer);
}

CriterionResult check_composition_anchors(const CompositionTable& table) {
  using A = ArrowType;
  const Timer timer;
  struct Cell {
    A first, second;
    ArrowSet want;
  };
  const Cell cells[] = {{A::Path, A::Path, {A::Far}},
                        {A::Hub, A::Old, {A::Mid, A::Path, A::Far}},
                        {A::Old, A::Hub, {A::Mid}}};
  bool ok = true;
  std::string detail;
  for (const auto& c : cells) {
    const ArrowSet got = table.at(c.first, c.second);
    ok &= got == c.want;
    detail += std::string(arrow_name(c.first)) + "*" + std::string(arrow_name(c.second)) + "=" +
              to_string(got) + " ";
  }
  const ArrowSet cl = closure_of({A::Hub, A::Path}, table);
  ok &= cl == ArrowSet{A::Hub, A::Path, A::Far};
  detail += "closure{Hub,Path}=" + to_string(cl);
  return finish(2, "composition anchors", ok, detail, timer);
}

CriterionResult check_closure_listing(const CompositionTable& table) {
  using A = ArrowType;
  const Timer timer;
  struct Case {
    ArrowSet gen, want;
  };
  const Case cases[] = {{{A::Mid}, {A::Mid, A::Path, A::Far}},
                        {{A::Hub, A::New}, {A::Hub, A::New, A::Near}},
                        {{A::Old, A::Mid}, {A::Old, A::Mid, A::Path, A::Far}}};
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    const ArrowSet got = closure_of(c.gen, table);
    ok &= got == c.want;
    detail += "closure" + to_string(c.gen) + "=" + to_string(got) + " ";
  }
  const HassePoset poset = build_hasse(enumerate_closed_classes(table));
  std::vector<bool> covered(poset.nodes.size(), false);
  for (const auto& [child, parent] : poset.covers) covered[child] = true;
  std::set<std::string> tops;
  for (std::size_t k = 0; k < poset.nodes.size(); ++k)
    if (!covered[k]) tops.insert(class_label(poset.nodes[k].arrows, table));
  const std::set<std::string> want_tops = {"Old/Near (Mid/Path/Far/Hub)",
                                           "Mid/New (Path/Far/Hub/Near)"};
  ok &= tops == want_tops;
  detail += "top classes:";
  for (const auto& t : tops) detail += " [" + t + "]";
  return finish(3, "closure listing spot-checks", ok, detail, timer);
}

CriterionResult check_constant_regime(VerifyLevel level, unsigned threads) {
  const Timer timer;
  const ModelParams params{1.0, 1.0, 0.25, 0.25};
  const NodeIndex n = 100000;
  const std::size_t seeds = full(level) ? 20 : 2;
  const double target = predicted_avg_degree(params).value;
  std::vector<double> avg(seeds);
  for_each_index(seeds, threads, [&](std::size_t s) {
    const auto net = sample_sequential(params, n, RandomSource(4000 + s));
    avg[s] = 2.0 * static_cast<double>(net.edge_count()) / n;
  });
  double mean = 0;
  for (double a : avg) mean += a;
  mean /= static_cast<double>(seeds);
  const double rel = std::fabs(mean - target) / target;
  return finish(4, "constant-regime average degree", rel <= tolerance::kConstantAvgDegreeRel,
                "mean <d(n)> = " + fmt(mean, 5) + " over " + std::to_string(seeds) +
                    " seeds at n=1e5, target " + fmt(target) + " +/- 5% (off by " +
                    fmt(100 * rel, 3) + "%)",
                timer);
}

CriterionResult check_logarithmic_regime(VerifyLevel level, unsigned threads) {
  const Timer timer;
  const ModelParams params{1.0, 1.0, 0.5, 0.5};
  const auto checkpoints = log_checkpoints(1000, 100000, 10);
  const std::size_t seeds = full(level) ? 10 : 2;
  const auto curve = mean_curve(params, checkpoints, seeds, 5000, threads);
  std::vector<double> x, y;
  for (const auto& pt : curve) {
    x.push_back(std::log(static_cast<double>(pt.n)));
    y.push_back(pt.avg_degree);
  }
  const LinearFit fit = fit_line(x, y);
  const double target = predicted_avg_degree(params).value;
  const double rel = std::fabs(fit.slope - target) / target;
  return finish(5, "logarithmic-regime growth", rel <= tolerance::kLogSlopeRel,
                "slope of <d(n)> on ln n = " + fmt(fit.slope, 5) + " (se " +
                    fmt(fit.slope_std_error, 2) + ") over n in [1e3, 1e5], " +
                    std::to_string(seeds) + " seeds, target " + fmt(target) + " +/- 10%",
                timer);
}

CriterionResult check_polynomial_regime(VerifyLevel level, unsigned threads) {
  const Timer timer;
  const ModelParams params{1.0, 1.0, 0.6, 0.6};
  const auto checkpoints = log_checkpoints(10000, 100000, 20);
  const std::size_t seeds = full(level) ? 10 : 3;
  const auto curve = mean_curve(params, checkpoints, seeds, 6000, threads);
  std::vector<double> x, y;
  for (const auto& pt : curve) {
    x.push_back(std::log(static_cast<double>(pt.n)));
    y.push_back(std::log(static_cast<double>(pt.edges)));
  }
  const LinearFit fit = fit_line(x, y);
  const double target = 1.0 + predicted_avg_degree(params).value;
  const double err = std::fabs(fit.slope - target);
  return finish(6, "polynomial-regime growth", err <= tolerance::kPolySlopeAbs,
                "slope of ln E(n) on ln n = " + fmt(fit.slope, 5) + " over n in [1e4, 1e5], " +
                    std::to_string(seeds) + " seed(s), target " + fmt(target) + " +/- 0.05",
                timer);
}

CriterionResult check_tail_exponents(VerifyLevel level, unsigned threads) {
  const Timer timer;
  const NodeIndex n = full(level) ? 200000 : 100000;
  struct Case {
    ModelParams params;
    double tol;
    TailFit fit;
  };
  Case cases[] = {{{1.0, 1.0, 0.5, 0.25}, tolerance::kGammaConstantAbs, {}},
                  {{1.0, 1.0, 0.6, 0.6}, tolerance::kGammaPolynomialAbs, {}}};
  for_each_index(2, threads, [&](std::size_t k) {
    const auto net = sample_sequential(cases[k].params, n, RandomSource(7000 + k));
    const DegreeStats stats = degree_stats(net);
    cases[k].fit = fit_tail_exponent(stats.degrees, tail_threshold(stats.degrees));
  });
  bool ok = true;
  std::string detail = "n=" + std::to_string(n) + ";";
  const char* names[] = {" (a) theta=0.5/0.25", " (b) theta=0.6/0.6"};
  for (int k = 0; k < 2; ++k) {
    const double want = *predicted_gamma(cases[k].params);
    const double got = cases[k].fit.gamma;
    ok &= std::fabs(got - want) <= cases[k].tol;
    detail += std::string(names[k]) + ": gamma_hat=" + fmt(got) + " (se " +
              fmt(cases[k].fit.std_error, 2) + ", dmin=" + std::to_string(cases[k].fit.dmin) +
              ", m=" + std::to_string(cases[k].fit.tail_count) + "), target " + fmt(want) +
              " +/- " + fmt(cases[k].tol) + ";";
  }
  return finish(7, "power-law tail exponents", ok, detail, timer);
}

CriterionResult check_expected_in_degree(VerifyLevel level, unsigned threads) {
  const Timer timer;
  // (a) closed form against the difference equation on 1000 points.
  double worst = 0;
  std::size_t points = 0;
  for (double alpha : {0.5, 3.0})
    for (double beta : {0.0, 4.0})
      for (double ti : {0.0, 0.25, 0.5, 0.75, 1.0})
        for (double to : {0.0, 0.6})
          for (std::uint64_t j : {1, 2, 10, 100, 1000})
            for (std::uint64_t gap : {1, 10, 100, 1000, 10000}) {
              const ModelParams p{alpha, beta, ti, to};
              const double dout = static_cast<double>(std::min<std::uint64_t>(j - 1, 3));
              const double closed = expected_in_degree(static_cast<double>(j),
                                                       static_cast<double>(j + gap), dout, p);
              const double rec = expected_in_degree_by_recursion(j, j + gap, dout, p);
              worst = std::max(worst, std::fabs(closed - rec) / std::fabs(rec));
              ++points;
            }
  const bool grid_ok = worst < tolerance::kClosedFormRel;

  // (b) Monte Carlo. Node j's in-degree only reads its own degrees, so after
  // growing the network to j the row (j, k), k > j, is decided alone with the
  // same uniforms the full sampler would use.
  const ModelParams params{1.0, 1.0, 0.5, 0.25};
  const NodeIndex j = 100, n = 2000;
  const std::size_t reps = full(level) ? 10000 : 2000;
  std::vector<double> residual(reps);
  for_each_index(reps, threads, [&](std::size_t r) {
    const RandomSource rng(8000000 + r);
    const auto net = sample_sequential(params, j, rng);
    const std::uint32_t dout = net.deg_out(j);
    std::uint32_t din = 0;
    for (NodeIndex k = j + 1; k <= n; ++k)
      if (rng.uniform(StreamTag::Edge, j, k) < edge_prob(j, k, din, dout, params)) ++din;
    residual[r] = din - expected_in_degree(j, n, dout, params);
  });
  double mean = 0, sq = 0;
  for (double v : residual) mean += v;
  mean /= static_cast<double>(reps);
  for (double v : residual) sq += (v - mean) * (v - mean);
  const double se = std::sqrt(sq / static_cast<double>(reps - 1) / static_cast<double>(reps));
  const double z = mean / se;
  const bool mc_ok = std::fabs(z) <= tolerance::kMonteCarloSigmas;

  return finish(8, "closed-form expected in-degree", grid_ok && mc_ok,
                "recursion grid: " + std::to_string(points) + " points, max rel err " +
                    fmt(worst, 3) + " (limit 1e-10); Monte Carlo at n=2000, j=100, " +
                    std::to_string(reps) + " reps: mean residual " + fmt(mean, 3) + " = " +
                    fmt(z, 3) + " sigma (limit 3)",
                timer);
}

CriterionResult check_parallel_determinism(VerifyLevel, unsigned) {
  const Timer timer;
  const NodeIndex n = 10000;
  const ModelParams sets[] = {{1.0, 1.0, 0.5, 0.25}, {1.0, 1.0, 0.6, 0.6}};
  bool ok = true;
  std::string detail;
  for (std::size_t s = 0; s < 2; ++s) {
    const RandomSource rng(9000 + s);
    const NetworkHeader header{n, sets[s], rng.seed(), ModelKind::Dapa};
    std::ostringstream ref;
    write_network(ref, header, sample_sequential(sets[s], n, rng));
    for (unsigned w : {1u, 2u, 4u, 8u}) {
      const auto par = sample_parallel(sets[s], n, rng, w, n / w);
      std::ostringstream out;
      write_network(out, header, par.network);
      const bool same = out.str() == ref.str();
      const bool rounds_ok = par.schedule.rounds <= 2 * w;
      ok &= same && rounds_ok;
      if (s == 0)
        detail += "w=" + std::to_string(w) + ": " + (same ? "identical" : "DIFFERENT") +
                  ", rounds " + std::to_string(par.schedule.rounds) + " <= " +
                  std::to_string(2 * w) + "; ";
      else if (!same || !rounds_ok)
        detail += "second parameter set fails at w=" + std::to_string(w) + "; ";
    }
  }
  detail += "n=1e4, block_size=n/w, two parameter sets";
  return finish(9, "parallel determinism", ok, detail, timer);
}

CriterionResult check_dorpa_equivalence(VerifyLevel level, unsigned threads) {
  const Timer timer;
  const ModelParams params{1.0, 1.0, 0.5, 0.3};

  // (a) event loop and column evaluation agree byte for byte.
  const NodeIndex n_eq = 1000;
  const std::size_t seeds = full(level) ? 50 : 10;
  std::vector<char> same(seeds, 0);
  for_each_index(seeds, threads, [&](std::size_t s) {
    const RandomSource rng(10000 + s);
    const NetworkHeader header{n_eq, params, rng.seed(), ModelKind::Dorpa};
    const auto seq = sample_dorpa_sequential(params, n_eq, rng);
    const auto ev = sample_dorpa_events(params, n_eq, rng);
    std::ostringstream a, b;
    write_network(a, header, seq.network);
    write_network(b, header, ev.network);
    same[s] = a.str() == b.str() && seq.triggers() == ev.triggers();
  });
  const auto identical = static_cast<std::size_t>(std::count(same.begin(), same.end(), 1));

  // (b) edge frequencies grouped by (j, d_in, d_out) at decision time
  // against the closed form. Each dyad's indicator minus its conditional
  // probability is a martingale difference, so bin sums are uncorrelated and
  // sum (O - E)^2 / V is chi-square with one degree of freedom per bin.
  constexpr NodeIndex n = 30;
  const std::size_t reps = full(level) ? 100000 : 20000;
  constexpr std::size_t kSide = 32;
  struct Bin {
    double trials = 0, observed = 0, expected = 0, variance = 0;
  };
  const unsigned workers = std::max(1u, threads);
  std::vector<std::vector<Bin>> partial(workers, std::vector<Bin>(kSide * kSide * kSide));
  std::vector<double> prob(kSide * kSide * kSide, -1.0);
  for (NodeIndex j = 2; j <= n; ++j)
    for (NodeIndex din = 0; din < n; ++din)
      for (NodeIndex dout = 0; dout < n; ++dout)
        prob[(j * kSide + din) * kSide + dout] = dorpa_edge_prob(1, j, din, dout, params);
  // Slot k of `partial` is only touched by replications r with r % workers == k.
  for_each_index(workers, threads, [&](std::size_t w) {
    auto& bins = partial[w];
    std::vector<std::uint32_t> din(n + 1);
    for (std::size_t r = w; r < reps; r += workers) {
      const auto net = sample_dorpa_events(params, n, RandomSource(20000000 + r)).network;
      std::fill(din.begin(), din.end(), 0);
      for (NodeIndex j = 2; j <= n; ++j) {
        const auto col = net.column(j);
        std::size_t c = 0;
        for (NodeIndex i = 1; i < j; ++i) {
          const bool edge = c < col.size() && col[c] == i;
          if (edge) ++c;
          const std::size_t key = (j * kSide + din[i]) * kSide + net.column(i).size();
          const double p = prob[key];
          Bin& b = bins[key];
          ++b.trials;
          b.observed += edge;
          b.expected += p;
          b.variance += p * (1.0 - p);
        }
        for (NodeIndex i : col) ++din[i];
      }
    }
  });
  std::vector<Bin> bins(kSide * kSide * kSide);
  for (const auto& part : partial)
    for (std::size_t k = 0; k < bins.size(); ++k) {
      bins[k].trials += part[k].trials;
      bins[k].observed += part[k].observed;
      bins[k].expected += part[k].expected;
      bins[k].variance += part[k].variance;
    }
  // Bins with fewer than 5 expected edges or non-edges are pooled.
  Bin pooled;
  double chi2 = 0;
  std::size_t df = 0;
  for (const Bin& b : bins) {
    if (b.trials == 0) continue;
    if (b.expected >= 5.0 && b.trials - b.expected >= 5.0) {
      chi2 += (b.observed - b.expected) * (b.observed - b.expected) / b.variance;
      ++df;
    } else {
      pooled.trials += b.trials;
      pooled.observed += b.observed;
      pooled.expected += b.expected;
      pooled.variance += b.variance;
    }
  }
  if (pooled.variance > 0) {
    chi2 += (pooled.observed - pooled.expected) * (pooled.observed - pooled.expected) /
            pooled.variance;
    ++df;
  }
  const double p_value = boost::math::gamma_q(0.5 * static_cast<double>(df), 0.5 * chi2);
  const bool ok = identical == seeds && p_value > tolerance::kChiSquareMinP;
  return finish(10, "DORPA event loop equivalence", ok,
                std::to_string(identical) + "/" + std::to_string(seeds) +
                    " seeds byte-identical at n=1000; chi-square " + fmt(chi2, 5) + " on " +
                    std::to_string(df) + " bins over " + std::to_string(reps) +
                    " replications at n=30, p = " + fmt(p_value, 3) + " (need > 1e-3)",
                timer);
}

CriterionResult check_exponent_self_consistency() {
  const Timer timer;
  struct Point {
    double ti, to, j, n;
  };
  // 1 << j << n per regime; the critical line converges like 1 / ln j and
  // needs the largest window.
  const Point points[] = {
      {0.5, 0.25, 1e6, 1e18},   {0.3, 0.3, 1e6, 1e18},    {0.6, 0.2, 1e6, 1e18},
      {0.8, 0.1, 1e6, 1e18},    {0.2, 0.1, 1e6, 1e18},    {0.5, 0.5, 1e200, 1e300},
      {0.3, 0.7, 1e200, 1e300}, {0.6, 0.4, 1e200, 1e300}, {0.8, 0.2, 1e200, 1e300},
      {0.4, 0.6, 1e200, 1e300}, {0.6, 0.6, 1e12, 1e30},   {0.7, 0.5, 1e12, 1e30},
      {0.5, 0.8, 1e12, 1e30},   {0.9, 0.4, 1e12, 1e30},   {0.6, 0.9, 1e12, 1e30}};
  bool ok = true;
  double worst[3] = {0, 0, 0};
  for (const auto& pt : points) {
    const ModelParams p{1.0, 1.0, pt.ti, pt.to};
    const double want = *predicted_gamma(p);
    const double got = exponent_from_expected_degree(p, pt.j, pt.n);
    const double rel = std::fabs(got - want) / want;
    ok &= rel <= tolerance::kExponentRel;
    auto& w = worst[static_cast<int>(regime_classify(p))];
    w = std::max(w, rel);
  }
  return finish(11, "exponent self-consistency", ok,
                "15 points; worst relative error constant " + fmt(worst[0], 3) +
                    ", logarithmic " + fmt(worst[1], 3) + ", polynomial " + fmt(worst[2], 3) +
                    " (limit 1%)",
                timer);
}

std::vector<CriterionResult> run_acceptance(
    const VerifyOptions& options, const std::function<void(const CriterionResult&)>& progress) {
  const CompositionTable& table = options.table ? *options.table : composition_table();
  const unsigned threads = std::max(1u, options.threads);
  const VerifyLevel level = options.level;
  const std::function<CriterionResult()> checks[] = {
      [&] { return check_enumeration_counts(table); },
      [&] { return check_composition_anchors(table); },
      [&] { return check_closure_listing(table); },
      [&] { return check_constant_regime(level, threads); },
      [&] { return check_logarithmic_regime(level, threads); },
      [&] { return check_polynomial_regime(level, threads); },
      [&] { return check_tail_exponents(level, threads); },
      [&] { return check_expected_in_degree(level, threads); },
      [&] { return check_parallel_determinism(level, threads); },
      [&] { return check_dorpa_equivalence(level, threads); },
      [&] { return check_exponent_self_consistency(); }};
  std::vector<CriterionResult> results;
  for (int id = 1; id <= 11; ++id) {
    if (!options.only.empty() &&
        std::find(options.only.begin(), options.only.end(), id) == options.only.end())
      continue;
    CriterionResult r;
    try {
      r = checks[id - 1]();
    } catch (const std::exception& e) {
      r = {id, "criterion " + std::to_string(id), false, std::string("error: ") + e.what(), 0};
    }
    if (progress) progress(r);
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace dyadgen

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

// dyadgen: enumerate arrow classes, sample growing networks, analyze them
// and run the acceptance suite.
//
// Exit codes: 0 success, 1 usage, 2 validation or parse error, 3 failed
// verification. DYADGEN_WORKERS sets the default worker/thread count.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dyadgen/analytics.hpp"
#include "dyadgen/arrow_algebra.hpp"
#include "dyadgen/dorpa.hpp"
#include "dyadgen/errors.hpp"
#include "dyadgen/format.hpp"
#include "dyadgen/io.hpp"
#include "dyadgen/network.hpp"
#include "dyadgen/verify.hpp"

namespace {

using namespace dyadgen;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitVerify = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

unsigned default_workers() {
  if (const char* env = std::getenv("DYADGEN_WORKERS")) {
    const auto v = parse_number<unsigned>(env);
    if (v && *v >= 1) return *v;
    std::cerr << "dyadgen: ignoring DYADGEN_WORKERS='" << env << "'\n";
  }
  return 1;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  return os;
}

// "Hub/Path" -> {Hub, Path}; "" or "None" -> {}.
ArrowSet parse_arrow_set(const std::string& text) {
  ArrowSet out;
  if (text.empty() || text == "None") return out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find('/', start), text.size());
    const std::string name = text.substr(start, end - start);
    const auto t = parse_arrow_type(name);
    if (!t) throw UsageError("unknown arrow kind '" + name + "'");
    out.insert(*t);
    start = end + 1;
  }
  return out;
}

// "First,Second=A/B" overwrites one composition cell.
CompositionTable tampered_table(const std::string& spec) {
  const auto comma = spec.find(',');
  const auto eq = spec.find('=');
  if (comma == std::string::npos || eq == std::string::npos || eq < comma)
    throw UsageError("--tamper expects First,Second=A/B");
  const auto first = parse_arrow_type(spec.substr(0, comma));
  const auto second = parse_arrow_type(spec.substr(comma + 1, eq - comma - 1));
  if (!first || !second) throw UsageError("--tamper: unknown arrow kind in '" + spec + "'");
  CompositionTable table = composition_table();
  table.set(*first, *second, parse_arrow_set(spec.substr(eq + 1)));
  return table;
}

void add_params(RunManifest& m, const ModelParams& p) {
  m.set("alpha", p.alpha);
  m.set("beta", p.beta);
  m.set("theta_in", p.theta_in);
  m.set("theta_out", p.theta_out);
}

// ---- enumerate / closure / metadag ----

struct EnumerateArgs {
  bool closed = false;
  std::string hasse, table, manifest;
};

int cmd_enumerate(const EnumerateArgs& a) {
  const CompositionTable& table = composition_table();
  const auto closed = enumerate_closed_classes(table);
  if (a.closed) {
    for (const auto& c : closed) std::cout << class_label(c.arrows, table) << '\n';
  } else {
    for (const auto& c : enumerate_deletion_invariant())
      std::cout << generated_label(c.arrows, table) << '\n';
  }
  if (!a.hasse.empty()) {
    auto os = open_out(a.hasse);
    write_hasse_dot(os, build_hasse(closed), table);
  }
  if (!a.table.empty()) {
    auto os = open_out(a.table);
    write_composition_csv(os, table);
  }
  if (!a.manifest.empty()) {
    RunManifest m;
    m.set("version", std::string(kVersion));
    m.set("command", std::string(a.closed ? "enumerate --closed" : "enumerate"));
    m.set("classes", static_cast<std::uint64_t>(a.closed ? closed.size() : 96));
    m.write_file(a.manifest);
  }
  return kExitOk;
}

int cmd_closure(const std::string& arrows) {
  const ArrowSet gens = parse_arrow_set(arrows);
  const auto& table = composition_table();
  const ArrowSet cl = transitive_closure(gens, table);
  std::cout << to_string(cl.without(ArrowType::Self)) << '\n' << class_label(cl, table) << '\n';
  return kExitOk;
}

int cmd_metadag(const std::string& arrows, NodeIndex n, const std::string& out) {
  if (n < 2 || n > 12) throw ValidationError("metadag: n must be in [2, 12] (got " + std::to_string(n) + ")");
  auto os = open_out(out);
  write_meta_dag_dot(os, parse_arrow_set(arrows), n);
  return kExitOk;
}

// ---- sample ----

struct SampleArgs {
  std::string model = "dapa";
  NodeIndex n = 0;
  std::uint64_t seed = 1;
  ModelParams params;
  unsigned workers = 1;
  NodeIndex block_size = 0;
  bool events = false;
  std::string output, manifest;
};

int cmd_sample(SampleArgs a) {
  const auto model = parse_model(a.model);
  if (!model) throw UsageError("--model must be dapa or dorpa");
  if (a.events && *model != ModelKind::Dorpa) throw UsageError("--events requires --model dorpa");
  if (*model == ModelKind::Dorpa && a.workers > 1)
    throw UsageError("--workers > 1 is only available for --model dapa");
  a.params.validate();
  if (a.n < 2) throw ValidationError("n must be >= 2 (got " + std::to_string(a.n) + ")");
  if (a.events && a.n > kMaxEventNodes)
    throw ValidationError("n must be <= " + std::to_string(kMaxEventNodes) +
                          " for the event loop (got " + std::to_string(a.n) + ")");
  if (a.manifest.empty()) a.manifest = a.output + ".manifest";

  const RandomSource rng(a.seed);
  RunManifest m;
  m.set("version", std::string(kVersion));
  m.set("command", std::string("sample"));
  m.set("model", std::string(model_name(*model)));
  m.set("n", std::uint64_t{a.n});
  add_params(m, a.params);
  m.set("seed", a.seed);

  const auto start = std::chrono::steady_clock::now();
  GrowingNetwork net;
  if (*model == ModelKind::Dapa) {
    if (a.workers > 1) {
      const NodeIndex block = a.block_size ? a.block_size : (a.n + a.workers - 1) / a.workers;
      auto par = sample_parallel(a.params, a.n, rng, a.workers, block);
      m.set("sampler", std::string("block-parallel"));
      m.set("workers", std::uint64_t{a.workers});
      m.set("block_size", std::uint64_t{block});
      m.set("rounds", static_cast<std::uint64_t>(par.schedule.rounds));
      net = std::move(par.network);
    } else {
      net = sample_sequential(a.params, a.n, rng);
      m.set("sampler", std::string("sequential"));
      m.set("workers", std::uint64_t{1});
      m.set("rounds", std::uint64_t{1});
    }
  } else {
    auto s = a.events ? sample_dorpa_events(a.params, a.n, rng) : sample_dorpa_sequential(a.params, a.n, rng);
    m.set("sampler", std::string(a.events ? "events" : "sequential"));
    m.set("workers", std::uint64_t{1});
    m.set("triggers", s.triggers());
    if (a.events) m.set("pops", s.pops);
    net = std::move(s.network);
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  m.set("edges", net.edge_count());
  m.set("output", a.output);
  // The one field that differs between repeated runs; kept last.
  m.set("wall_time_s", secs);

  write_network_file(a.output, {a.n, a.params, a.seed, *model}, net);
  m.write_file(a.manifest);
  std::cerr << "sampled n=" << a.n << " edges=" << net.edge_count() << " in "
            << format_double(secs) << " s\n";
  return kExitOk;
}

// ---- analyze ----

int cmd_analyze(const std::string& input, std::string prefix, unsigned per_decade) {
  if (prefix.empty()) prefix = input + ".";
  const NetworkFile file = read_network_file(input);
  const DegreeStats stats = degree_stats(file.network);
  std::vector<CurvePoint> curve;
  if (file.header.n >= 1)
    curve = avg_degree_curve(file.network, log_checkpoints(1, file.header.n, per_decade));
  const RegimeReport report = regime_report(file.header.params, stats, curve);

  const auto emit = [&](const std::string& name, auto&& writer) {
    auto os = open_out(prefix + name);
    writer(os);
  };
  emit("degree_hist.csv", [&](std::ostream& os) { write_degree_hist_csv(os, stats); });
  emit("ccdf.csv", [&](std::ostream& os) { write_ccdf_csv(os, stats); });
  emit("avg_degree.csv", [&](std::ostream& os) { write_avg_degree_csv(os, curve); });
  emit("regime_report.csv", [&](std::ostream& os) { write_regime_report_csv(os, report); });

  RunManifest m;
  m.set("version", std::string(kVersion));
  m.set("command", std::string("analyze"));
  m.set("input", input);
  m.set("header", format_header(file.header));
  m.set("per_decade", std::uint64_t{per_decade});
  m.write_file(prefix + "manifest");

  std::cout << "regime " << regime_name(report.regime) << ", <d> = "
            << format_double(report.avg_degree);
  if (report.predicted_gamma) std::cout << ", predicted gamma " << format_double(*report.predicted_gamma);
  if (report.fitted_tail) std::cout << ", fitted gamma " << format_double(report.fitted_tail->gamma);
  std::cout << '\n';
  return kExitOk;
}

// ---- verify ----

struct VerifyArgs {
  std::string level = "fast";
  std::vector<int> only;
  unsigned threads = 1;
  std::string tamper, manifest;
};

int cmd_verify(const VerifyArgs& a) {
  VerifyOptions opt;
  if (a.level == "fast")
    opt.level = VerifyLevel::Fast;
  else if (a.level == "full")
    opt.level = VerifyLevel::Full;
  else
    throw UsageError("--level must be fast or full");
  for (int id : a.only)
    if (id < 1 || id > 11) throw UsageError("--only takes criteria 1..11");
  opt.only = a.only;
  opt.threads = a.threads;
  std::optional<CompositionTable> table;
  if (!a.tamper.empty()) {
    table = tampered_table(a.tamper);
    opt.table = &*table;
  }
  const auto results = run_acceptance(opt, [](const CriterionResult& r) {
    std::cout << format_result(r) << std::endl;
  });
  std::size_t failed = 0;
  for (const auto& r : results) failed += !r.passed;
  std::cout << (failed ? "FAILED " : "passed ") << results.size() - failed << "/" << results.size()
            << " criteria (level " << a.level << ")\n";
  if (!a.manifest.empty()) {
    RunManifest m;
    m.set("version", std::string(kVersion));
    m.set("command", std::string("verify"));
    m.set("level", a.level);
    if (!a.tamper.empty()) m.set("tamper", a.tamper);
    for (const auto& r : results)
      m.set("C" + std::to_string(r.id), std::string(r.passed ? "pass" : "fail"));
    m.write_file(a.manifest);
  }
  return failed ? kExitVerify : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dyadgen: causal-arrow classes and growing-network samplers"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  EnumerateArgs ea;
  auto* en = app.add_subcommand("enumerate", "List deletion-invariant (or closed) arrow classes");
  en->add_flag("--closed", ea.closed, "List the closed classes instead of all invariant sets");
  en->add_option("--hasse", ea.hasse, "Write the Hasse diagram of closed classes as DOT");
  en->add_option("--table", ea.table, "Write the composition table as CSV");
  en->add_option("--manifest", ea.manifest, "Write a run manifest");

  std::string closure_arrows;
  auto* cl = app.add_subcommand("closure", "Print the transitive closure of an arrow set");
  cl->add_option("arrows", closure_arrows, "Arrow kinds joined by '/', e.g. Hub/Path")->required();

  std::string md_arrows, md_out;
  NodeIndex md_n = 4;
  auto* md = app.add_subcommand("metadag", "Write the dyad meta-DAG of an arrow set as DOT");
  md->add_option("arrows", md_arrows, "Arrow kinds joined by '/'")->required();
  md->add_option("--n", md_n, "Nodes")->capture_default_str();
  md->add_option("-o,--output", md_out, "DOT file")->required();

  SampleArgs sa;
  sa.workers = default_workers();
  auto* sm = app.add_subcommand("sample", "Sample a growing network");
  sm->add_option("--model", sa.model, "dapa or dorpa")->capture_default_str();
  sm->add_option("-n,--n", sa.n, "Number of nodes")->required();
  sm->add_option("--seed", sa.seed, "64-bit seed")->capture_default_str();
  sm->add_option("--alpha", sa.params.alpha)->capture_default_str();
  sm->add_option("--beta", sa.params.beta)->capture_default_str();
  sm->add_option("--theta-in", sa.params.theta_in)->capture_default_str();
  sm->add_option("--theta-out", sa.params.theta_out)->capture_default_str();
  sm->add_option("--workers", sa.workers, "Block-parallel DAPA workers (default $DYADGEN_WORKERS or 1)");
  auto* bs = sm->add_option("--block-size", sa.block_size, "Block side in nodes (default ceil(n / workers))");
  auto* ev = sm->add_flag("--events", sa.events, "Use the DORPA event loop");
  ev->excludes(bs);
  sm->add_option("-o,--output", sa.output, "Edge-list file")->required();
  sm->add_option("--manifest", sa.manifest, "Manifest file (default <output>.manifest)");

  std::string an_input, an_prefix;
  unsigned an_per_decade = 10;
  auto* an = app.add_subcommand("analyze", "Degree statistics and regime report for a network file");
  an->add_option("input", an_input, "Edge-list file")->required();
  an->add_option("--prefix", an_prefix, "Output path prefix (default <input>.)");
  an->add_option("--per-decade", an_per_decade, "Curve checkpoints per decade")
      ->capture_default_str()
      ->check(CLI::Range(1u, 1000u));

  VerifyArgs va;
  va.threads = default_workers();
  auto* vf = app.add_subcommand("verify", "Run the acceptance suite");
  vf->add_option("--level", va.level, "fast or full")->capture_default_str();
  vf->add_option("--only", va.only, "Criteria to run (1..11)")->delimiter(',');
  vf->add_option("--threads", va.threads, "Threads for seeds and replications")->check(CLI::PositiveNumber);
  vf->add_option("--tamper", va.tamper, "Overwrite one composition cell, First,Second=A/B");
  vf->add_option("--manifest", va.manifest, "Write a run manifest");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*en) return cmd_enumerate(ea);
    if (*cl) return cmd_closure(closure_arrows);
    if (*md) return cmd_metadag(md_arrows, md_n, md_out);
    if (*sm) return cmd_sample(sa);
    if (*an) return cmd_analyze(an_input, an_prefix, an_per_decade);
    if (*vf) return cmd_verify(va);
  } catch (const UsageError& e) {
    std::cerr << "dyadgen: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValidationError& e) {
    std::cerr << "dyadgen: invalid configuration: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const ParseError& e) {
    std::cerr << "dyadgen: parse error at " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "dyadgen: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitUsage;
}

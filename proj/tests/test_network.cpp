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
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dyadgen/errors.hpp"
#include "dyadgen/io.hpp"
#include "dyadgen/network.hpp"
#include "test_support.hpp"

using namespace dyadgen;

namespace {

// Straight transcription of the sampler: p_ij = (alpha + theta_in din_i +
// theta_out dout_i) / (j - 2 + alpha + beta), with din_i counting edges
// (i, k), k < j, and dout_i the edges (k, i).
GrowingNetwork oracle_sample(const ModelParams& p, NodeIndex n, const RandomSource& rng) {
  GrowingNetwork net(n);
  std::vector<double> din(n + 1, 0.0), dout(n + 1, 0.0);
  for (NodeIndex j = 2; j <= n; ++j) {
    std::vector<NodeIndex> hits;
    for (NodeIndex i = 1; i < j; ++i) {
      const double prob = (p.alpha + p.theta_in * din[i] + p.theta_out * dout[i]) /
                          (static_cast<double>(j) - 2.0 + p.alpha + p.beta);
      if (rng.uniform(StreamTag::Edge, i, j) < prob) hits.push_back(i);
    }
    for (NodeIndex i : hits) {
      net.add_edge(i, j);
      din[i] += 1;
      dout[j] += 1;
    }
  }
  return net;
}

const ModelParams kParamSets[] = {{1.0, 1.0, 0.5, 0.25},
                                  {1.0, 1.0, 0.6, 0.6},
                                  {0.3, 0.0, 1.0, 1.0},
                                  {2.5, 3.0, 0.0, 0.0},
                                  {1.0, 0.0, 0.0, 1.0}};

}  // namespace

TEST_CASE("parameter validation names the violated bound") {
  auto message = [](ModelParams p) {
    try {
      p.validate();
    } catch (const ValidationError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message({0.0, 1, 0, 0}).find("alpha") != std::string::npos);
  CHECK(message({-1, 1, 0, 0}).find("> 0") != std::string::npos);
  CHECK(message({1, -0.5, 0, 0}).find("beta") != std::string::npos);
  CHECK(message({1, 1, 1.5, 0}).find("theta_in must lie in [0, 1]") != std::string::npos);
  CHECK(message({1, 1, 0, -0.1}).find("theta_out") != std::string::npos);
  CHECK(message({1, 1, std::nan(""), 0}).find("theta_in") != std::string::npos);
  CHECK(message({1, 1, 1, 1}).empty());
}

TEST_CASE("edge probability") {
  const ModelParams p{1.0, 1.0, 0.5, 0.25};
  CHECK(edge_prob(1, 2, 0, 0, p) == doctest::Approx(1.0 / 2.0));
  CHECK(edge_prob(3, 10, 4, 2, p) == doctest::Approx((1 + 2 + 0.5) / 10.0));
  CHECK_THROWS_AS(edge_prob(0, 2, 0, 0, p), PreconditionError);
  CHECK_THROWS_AS(edge_prob(2, 2, 0, 0, p), PreconditionError);
  CHECK_THROWS_AS(edge_prob(3, 5, 2, 0, p), PreconditionError);  // din > j - 1 - i
  CHECK_THROWS_AS(edge_prob(3, 5, 0, 3, p), PreconditionError);  // dout > i - 1
  // Corner of the box: every earlier dyad present, p reaches exactly 1.
  const ModelParams corner{1.0, 0.0, 1.0, 1.0};
  CHECK(edge_prob(4, 9, 4, 3, corner) == doctest::Approx(1.0));
}

TEST_CASE("sequential sampler equals the transcribed oracle") {
  for (const auto& p : kParamSets) {
    for (std::uint64_t seed : {1ull, 2ull, 0xdeadbeefcafeull}) {
      const RandomSource rng(seed);
      const auto net = sample_sequential(p, 300, rng);
      CHECK(net == oracle_sample(p, 300, rng));
      CHECK(net.degrees_consistent());
    }
  }
}

TEST_CASE("sampler observer sees every column") {
  const ModelParams p{1.0, 1.0, 0.5, 0.25};
  std::vector<std::uint64_t> edges;
  NodeIndex last = 0;
  const auto net = sample_sequential(p, 50, RandomSource(3), [&](NodeIndex j, std::uint64_t e) {
    CHECK(j == last + 1);
    last = j;
    edges.push_back(e);
  });
  CHECK(last == 50);
  CHECK(edges.front() == 0);
  CHECK(edges.back() == net.edge_count());
  for (std::size_t k = 1; k < edges.size(); ++k) CHECK(edges[k] >= edges[k - 1]);
}

TEST_CASE("sampler preconditions") {
  const ModelParams p;
  CHECK_THROWS_AS(sample_sequential(p, 1, RandomSource(1)), PreconditionError);
  CHECK_THROWS_AS(sample_sequential({0.0, 1, 0, 0}, 10, RandomSource(1)), ValidationError);
  CHECK_THROWS_AS(sample_parallel(p, 10, RandomSource(1), 0, 5), PreconditionError);
  CHECK_THROWS_AS(sample_parallel(p, 10, RandomSource(1), 2, 0), PreconditionError);
}

TEST_CASE("growing network bookkeeping") {
  GrowingNetwork net(5);
  net.add_edge(1, 3);
  net.add_edge(2, 3);
  net.add_edge(1, 4);
  CHECK(net.edge_count() == 3);
  CHECK(net.deg_in(1) == 2);
  CHECK(net.deg_out(3) == 2);
  CHECK(net.degree(1) == 2);
  CHECK(net.has_edge(2, 3));
  CHECK_FALSE(net.has_edge(1, 2));
  CHECK(net.edges() == std::vector<Dyad>{{1, 3}, {2, 3}, {1, 4}});
  CHECK(net.degrees_consistent());
  CHECK_THROWS_AS(net.add_edge(1, 3), PreconditionError);  // rows must increase
  CHECK_THROWS_AS(net.add_edge(3, 3), PreconditionError);
  CHECK_THROWS_AS(net.add_edge(1, 6), PreconditionError);
}

TEST_CASE("column decision equals per-dyad evaluation on any row range") {
  const ModelParams p{1.0, 1.0, 0.6, 0.6};
  const RandomSource rng(11);
  const NodeIndex n = 400;
  const auto net = sample_sequential(p, n, rng);
  std::vector<std::uint32_t> din(n + 1), dout(n + 1);
  for (NodeIndex i = 1; i <= n; ++i) dout[i] = net.deg_out(i);
  std::vector<double> scratch;
  for (NodeIndex j : {2u, 3u, 64u, 65u, 66u, 129u, 400u}) {
    // In-degrees as they stood before column j.
    std::fill(din.begin(), din.end(), 0);
    for (NodeIndex c = 2; c < j; ++c)
      for (NodeIndex i : net.column(c)) ++din[i];
    for (auto [lo, hi] : {std::pair<NodeIndex, NodeIndex>{1, j}, {1, 2}, {3, j}, {63, j}, {65, j}}) {
      if (lo >= hi || hi > j) continue;
      std::vector<NodeIndex> hits;
      detail::decide_column(p, rng, j, lo, hi, din.data(), dout.data(), scratch, hits);
      std::vector<NodeIndex> want;
      for (NodeIndex i = lo; i < hi; ++i)
        if (rng.uniform(StreamTag::Edge, i, j) < edge_prob(i, j, din[i], dout[i], p)) want.push_back(i);
      CHECK(hits == want);
    }
  }
}

TEST_CASE("parallel sampler equals sequential") {
  const NodeIndex n = 1500;
  for (const auto& p : kParamSets) {
    const RandomSource rng(77);
    const auto ref = sample_sequential(p, n, rng);
    for (unsigned w : {1u, 2u, 3u, 4u, 8u}) {
      for (NodeIndex block : {n / w, NodeIndex{97}, NodeIndex{64}, NodeIndex{1}, n + 5}) {
        if (block == 1 && w > 2) continue;  // many tiny blocks; covered once
        const auto par = sample_parallel(p, n, rng, w, block);
        CAPTURE(w);
        CAPTURE(block);
        CHECK(par.network == ref);
        CHECK(par.schedule.workers == w);
      }
    }
  }
}

TEST_CASE("block schedule uses 2w - 1 rounds on the square grid") {
  const ModelParams p{1.0, 1.0, 0.5, 0.25};
  const NodeIndex n = 2000;
  for (unsigned w : {1u, 2u, 4u, 8u}) {
    const auto par = sample_parallel(p, n, RandomSource(5), w, n / w);
    CHECK(par.schedule.row_blocks == w);
    CHECK(par.schedule.block_count == w * (w + 1) / 2);
    CHECK(par.schedule.rounds == 2 * w - 1);
    std::size_t total = 0;
    for (auto c : par.schedule.blocks_per_worker) total += c;
    CHECK(total == par.schedule.block_count);
  }
}

TEST_CASE("golden DAPA fixture") {
  const auto file = read_network_file(test_data("golden_dapa_n64.net"));
  const auto& h = file.header;
  CHECK(h.model == ModelKind::Dapa);
  const RandomSource rng(h.seed);
  CHECK(file.network == oracle_sample(h.params, h.n, rng));
  std::ostringstream os;
  write_network(os, h, sample_sequential(h.params, h.n, rng));
  CHECK(os.str() == read_text(test_data("golden_dapa_n64.net")));
}

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

#include "dyadgen/analytics.hpp"
#include "dyadgen/verify.hpp"

using namespace dyadgen;

TEST_CASE("structural criteria pass on the derived table") {
  const auto& t = composition_table();
  CHECK(check_enumeration_counts(t).passed);
  CHECK(check_composition_anchors(t).passed);
  CHECK(check_closure_listing(t).passed);
  CHECK(check_exponent_self_consistency().passed);
}

TEST_CASE("one tampered composition cell is caught") {
  CompositionTable t = composition_table();
  t.set(ArrowType::Path, ArrowType::Path, {ArrowType::Far, ArrowType::Mid});
  const auto r = check_enumeration_counts(t);
  CHECK_FALSE(r.passed);
  CHECK(r.detail.find("21 closed classes") == std::string::npos);
  CHECK_FALSE(check_composition_anchors(t).passed);
}

TEST_CASE("single-row continuation equals the full sampler") {
  // The Monte Carlo criterion grows the network to j and then decides only
  // row j; the in-degree it gets must be node j's in-degree in a full run.
  const ModelParams p{1.0, 1.0, 0.5, 0.25};
  const NodeIndex j = 100, n = 2000;
  for (std::uint64_t seed : {8000000ull, 8000001ull, 8000002ull}) {
    const RandomSource rng(seed);
    const auto prefix = sample_sequential(p, j, rng);
    const std::uint32_t dout = prefix.deg_out(j);
    std::uint32_t din = 0;
    for (NodeIndex k = j + 1; k <= n; ++k)
      if (rng.uniform(StreamTag::Edge, j, k) < edge_prob(j, k, din, dout, p)) ++din;
    const auto full = sample_sequential(p, n, rng);
    CHECK(full.deg_in(j) == din);
    CHECK(full.deg_out(j) == dout);
  }
}

TEST_CASE("cheap statistical criteria pass at the fast level") {
  CHECK(check_expected_in_degree(VerifyLevel::Fast, 1).passed);
  CHECK(check_parallel_determinism(VerifyLevel::Fast, 1).passed);
}

TEST_CASE("run_acceptance honours the selection and threads do not matter") {
  VerifyOptions opt;
  opt.level = VerifyLevel::Fast;
  opt.only = {2, 10};
  int calls = 0;
  const auto one = run_acceptance(opt, [&](const CriterionResult&) { ++calls; });
  REQUIRE(one.size() == 2);
  CHECK(calls == 2);
  CHECK(one[0].id == 2);
  CHECK(one[1].id == 10);
  opt.threads = 3;
  const auto three = run_acceptance(opt);
  CHECK(three[1].detail == one[1].detail);
  CHECK(three[1].passed);
  CHECK(format_result(one[0]).rfind("PASS  C2  ", 0) == 0);
}

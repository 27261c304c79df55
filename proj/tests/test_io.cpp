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

#include <sstream>
#include <string>

#include "dyadgen/errors.hpp"
#include "dyadgen/io.hpp"

using namespace dyadgen;

namespace {

const std::string kHeader =
    "dyadgen-net v1 n=5 alpha=1 beta=0.5 theta_in=0.25 theta_out=0.1 seed=9 model=dapa\n";

NetworkFile parse(const std::string& text) {
  std::istringstream is(text);
  return read_network(is);
}

std::size_t error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("network files round-trip byte for byte") {
  const ModelParams p{0.1, 0.3, 1.0 / 3.0, 0.7};
  const RandomSource rng(0xffffffffffffffffull);
  const auto net = sample_sequential(p, 200, rng);
  const NetworkHeader h{200, p, rng.seed(), ModelKind::Dapa};
  std::ostringstream first;
  write_network(first, h, net);
  const NetworkFile back = parse(first.str());
  CHECK(back.header == h);
  CHECK(back.network == net);
  std::ostringstream second;
  write_network(second, back.header, back.network);
  CHECK(second.str() == first.str());
}

TEST_CASE("header format") {
  const NetworkHeader h{5, {1, 0.5, 0.25, 0.1}, 9, ModelKind::Dapa};
  CHECK(format_header(h) + "\n" == kHeader);
  CHECK(model_name(ModelKind::Dorpa) == "dorpa");
  CHECK(parse_model("dorpa") == ModelKind::Dorpa);
  CHECK_FALSE(parse_model("DAPA"));
}

TEST_CASE("reader normalizes order and skips blank lines") {
  const auto f = parse(kHeader + "2 4\n\n1 3\r\n1 4\n  2 3  \n");
  CHECK(f.network.edges() == std::vector<Dyad>{{1, 3}, {2, 3}, {1, 4}, {2, 4}});
  CHECK(f.network.degrees_consistent());
  // Header keys in another order are accepted.
  const auto g = parse(
      "dyadgen-net v1 model=dorpa seed=1 n=3 theta_out=0 theta_in=0 beta=0 alpha=2\n1 2\n");
  CHECK(g.header.model == ModelKind::Dorpa);
  CHECK(g.header.params.alpha == 2.0);
}

TEST_CASE("parse errors carry line numbers") {
  CHECK(error_line("") == 1);
  CHECK(error_line("graph v1 n=5\n") == 1);
  CHECK(error_line("dyadgen-net v2 n=5 alpha=1 beta=1 theta_in=0 theta_out=0 seed=1 model=dapa\n") == 1);
  CHECK(error_line("dyadgen-net v1 n=5 alpha=1 beta=1 theta_in=0 theta_out=0 seed=1\n") == 1);
  CHECK(error_line("dyadgen-net v1 n=5 n=5 alpha=1 beta=1 theta_in=0 theta_out=0 seed=1 model=dapa\n") == 1);
  CHECK(error_line("dyadgen-net v1 n=5 alpha=1 beta=1 theta_in=0 theta_out=0 seed=1 model=dapa x=1\n") == 1);
  CHECK(error_line("dyadgen-net v1 n=5 alpha=0 beta=1 theta_in=0 theta_out=0 seed=1 model=dapa\n") == 1);
  CHECK(error_line("dyadgen-net v1 n=5 alpha=1 beta=1 theta_in=2 theta_out=0 seed=1 model=dapa\n") == 1);
  CHECK(error_line("dyadgen-net v1 n=5 alpha=one beta=1 theta_in=0 theta_out=0 seed=1 model=dapa\n") == 1);
  CHECK(error_line(kHeader + "1 2\n1 2 3\n") == 3);
  CHECK(error_line(kHeader + "1 2\nx 3\n") == 3);
  CHECK(error_line(kHeader + "1 2\n3 2\n") == 3);   // reversed
  CHECK(error_line(kHeader + "\n2 2\n") == 3);       // self pair
  CHECK(error_line(kHeader + "1 6\n") == 2);         // beyond n
  CHECK(error_line(kHeader + "0 2\n") == 2);
  CHECK(error_line(kHeader + "1 3\n2 4\n1 3\n") == 4);  // repeated
  CHECK(error_line(kHeader + "-1 3\n") == 2);
}

TEST_CASE("writer checks the header size") {
  const GrowingNetwork net(4);
  std::ostringstream os;
  CHECK_THROWS_AS(write_network(os, {5, {}, 1, ModelKind::Dapa}, net), PreconditionError);
}

TEST_CASE("run manifest") {
  RunManifest m;
  m.set("version", std::string(kVersion));
  m.set("n", std::uint64_t{100});
  m.set("alpha", 0.1);
  m.set("n", std::uint64_t{200});
  std::ostringstream os;
  m.write(os);
  CHECK(os.str() == "dyadgen-manifest v1\nversion=1.0.0\nn=200\nalpha=0.1\n");
  CHECK(m.entries().size() == 3);
}

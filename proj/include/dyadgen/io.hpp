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

#ifndef DYADGEN_IO_HPP
#define DYADGEN_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dyadgen/network.hpp"

namespace dyadgen {

inline constexpr std::string_view kVersion = "1.0.0";

enum class ModelKind { Dapa, Dorpa };

std::string_view model_name(ModelKind m);
std::optional<ModelKind> parse_model(std::string_view s);

struct NetworkHeader {
  NodeIndex n = 0;
  ModelParams params;
  std::uint64_t seed = 0;
  ModelKind model = ModelKind::Dapa;

  friend bool operator==(const NetworkHeader&, const NetworkHeader&) = default;
};

struct NetworkFile {
  NetworkHeader header;
  GrowingNetwork network;
};

// Edge-list format:
//
//   dyadgen-net v1 n=<n> alpha=<a> beta=<b> theta_in=<t> theta_out=<t> seed=<s> model=<dapa|dorpa>
//   i j
//   ...
//
// One "i j" line per edge, i < j, sorted by (j, i). Reals use the shortest
// round-trip decimal form, so write(read(f)) reproduces f byte for byte.

std::string format_header(const NetworkHeader& h);

/// Throws PreconditionError if header.n differs from the network size.
void write_network(std::ostream& os, const NetworkHeader& header, const GrowingNetwork& net);
void write_network_file(const std::string& path, const NetworkHeader& header,
                        const GrowingNetwork& net);

/// Accepts edge lines in any order and normalizes them; blank lines are
/// skipped. Throws ParseError (with the 1-based line) on a malformed header
/// or line, an out-of-range or repeated edge, or header parameters outside
/// the valid box.
NetworkFile read_network(std::istream& is);
NetworkFile read_network_file(const std::string& path);

/// Ordered key=value lines, first line "dyadgen-manifest v1".
class RunManifest {
 public:
  void set(std::string key, std::string value);
  void set(std::string key, double value);
  void set(std::string key, std::uint64_t value);
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  void write(std::ostream& os) const;
  void write_file(const std::string& path) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace dyadgen

#endif  // DYADGEN_IO_HPP

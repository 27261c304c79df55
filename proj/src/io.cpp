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

#include "dyadgen/io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

#include "dyadgen/errors.hpp"
#include "dyadgen/format.hpp"

namespace dyadgen {

namespace {

constexpr std::string_view kMagic = "dyadgen-net";
constexpr std::string_view kFormatVersion = "v1";

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t k = 0;
  while (k < line.size()) {
    while (k < line.size() && (line[k] == ' ' || line[k] == '\t')) ++k;
    const std::size_t start = k;
    while (k < line.size() && line[k] != ' ' && line[k] != '\t') ++k;
    if (k > start) out.push_back(line.substr(start, k - start));
  }
  return out;
}

std::string_view strip_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

NetworkHeader parse_header(std::string_view line) {
  const auto fail = [](const std::string& what) -> ParseError { return ParseError(1, what); };
  const auto tokens = split_ws(strip_cr(line));
  if (tokens.size() < 2 || tokens[0] != kMagic)
    throw fail("expected header starting with '" + std::string(kMagic) + "'");
  if (tokens[1] != kFormatVersion)
    throw fail("unsupported format version '" + std::string(tokens[1]) + "'");

  static constexpr std::string_view kKeys[] = {"n",         "alpha", "beta", "theta_in",
                                               "theta_out", "seed",  "model"};
  std::optional<std::string_view> values[7];
  for (std::size_t t = 2; t < tokens.size(); ++t) {
    const auto eq = tokens[t].find('=');
    if (eq == std::string_view::npos) throw fail("expected key=value, got '" + std::string(tokens[t]) + "'");
    const auto key = tokens[t].substr(0, eq);
    const auto it = std::find(std::begin(kKeys), std::end(kKeys), key);
    if (it == std::end(kKeys)) throw fail("unknown header key '" + std::string(key) + "'");
    auto& slot = values[it - std::begin(kKeys)];
    if (slot) throw fail("repeated header key '" + std::string(key) + "'");
    slot = tokens[t].substr(eq + 1);
  }
  for (std::size_t k = 0; k < 7; ++k)
    if (!values[k]) throw fail("missing header key '" + std::string(kKeys[k]) + "'");

  NetworkHeader h;
  auto real = [&](std::size_t k) {
    const auto v = parse_number<double>(*values[k]);
    if (!v) throw fail("bad value for " + std::string(kKeys[k]) + ": '" + std::string(*values[k]) + "'");
    return *v;
  };
  const auto n = parse_number<NodeIndex>(*values[0]);
  if (!n) throw fail("bad value for n: '" + std::string(*values[0]) + "'");
  h.n = *n;
  h.params = {real(1), real(2), real(3), real(4)};
  const auto seed = parse_number<std::uint64_t>(*values[5]);
  if (!seed) throw fail("bad value for seed: '" + std::string(*values[5]) + "'");
  h.seed = *seed;
  const auto model = parse_model(*values[6]);
  if (!model) throw fail("unknown model '" + std::string(*values[6]) + "'");
  h.model = *model;
  try {
    h.params.validate();
  } catch (const ValidationError& e) {
    throw fail(e.what());
  }
  return h;
}

}  // namespace

std::string_view model_name(ModelKind m) { return m == ModelKind::Dapa ? "dapa" : "dorpa"; }

std::optional<ModelKind> parse_model(std::string_view s) {
  if (s == "dapa") return ModelKind::Dapa;
  if (s == "dorpa") return ModelKind::Dorpa;
  return std::nullopt;
}

std::string format_header(const NetworkHeader& h) {
  std::string out(kMagic);
  out += ' ';
  out += kFormatVersion;
  out += " n=" + std::to_string(h.n);
  out += " alpha=" + format_double(h.params.alpha);
  out += " beta=" + format_double(h.params.beta);
  out += " theta_in=" + format_double(h.params.theta_in);
  out += " theta_out=" + format_double(h.params.theta_out);
  out += " seed=" + std::to_string(h.seed);
  out += " model=";
  out += model_name(h.model);
  return out;
}

void write_network(std::ostream& os, const NetworkHeader& header, const GrowingNetwork& net) {
  if (header.n != net.node_count())
    throw PreconditionError("write_network: header n does not match the network");
  std::string buf = format_header(header);
  buf += '\n';
  for (NodeIndex j = 1; j <= net.node_count(); ++j) {
    for (NodeIndex i : net.column(j)) {
      buf += std::to_string(i);
      buf += ' ';
      buf += std::to_string(j);
      buf += '\n';
    }
    if (buf.size() > (1u << 20)) {
      os << buf;
      buf.clear();
    }
  }
  os << buf;
}

void write_network_file(const std::string& path, const NetworkHeader& header,
                        const GrowingNetwork& net) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_network(os, header, net);
  if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

NetworkFile read_network(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError(1, "missing header");
  NetworkFile file;
  file.header = parse_header(line);
  const NodeIndex n = file.header.n;

  struct Entry {
    NodeIndex i, j;
    std::size_t line;
  };
  std::vector<Entry> entries;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    const auto tokens = split_ws(strip_cr(line));
    if (tokens.empty()) continue;
    if (tokens.size() != 2) throw ParseError(line_no, "expected 'i j'");
    const auto i = parse_number<NodeIndex>(tokens[0]);
    const auto j = parse_number<NodeIndex>(tokens[1]);
    if (!i || !j) throw ParseError(line_no, "expected two node indices");
    if (*i < 1 || *i >= *j || *j > n)
      throw ParseError(line_no, "edge (" + std::to_string(*i) + "," + std::to_string(*j) +
                                    ") needs 1 <= i < j <= " + std::to_string(n));
    entries.push_back({*i, *j, line_no});
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.j, a.i) < std::tie(b.j, b.i);
  });
  file.network = GrowingNetwork(n);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (k > 0 && entries[k].i == entries[k - 1].i && entries[k].j == entries[k - 1].j)
      throw ParseError(entries[k].line, "repeated edge (" + std::to_string(entries[k].i) + "," +
                                            std::to_string(entries[k].j) + ")");
    file.network.add_edge(entries[k].i, entries[k].j);
  }
  return file;
}

NetworkFile read_network_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  return read_network(is);
}

void RunManifest::set(std::string key, std::string value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries_.emplace_back(std::move(key), std::move(value));
}

void RunManifest::set(std::string key, double value) { set(std::move(key), format_double(value)); }

void RunManifest::set(std::string key, std::uint64_t value) {
  set(std::move(key), std::to_string(value));
}

void RunManifest::write(std::ostream& os) const {
  os << "dyadgen-manifest v1\n";
  for (const auto& [k, v] : entries_) os << k << '=' << v << '\n';
}

void RunManifest::write_file(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  write(os);
}

}  // namespace dyadgen

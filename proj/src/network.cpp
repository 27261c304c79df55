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

#include "dyadgen/network.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "dyadgen/errors.hpp"

namespace dyadgen {

namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Slack for the rounding of the numerator versus the denominator at the
// corner of the parameter box (theta = 1, beta = 0, saturated degrees).
constexpr double kProbabilitySlack = 1e-12;

}  // namespace

void ModelParams::validate() const {
  auto fail = [](const std::string& what, double v) {
    throw ValidationError(what + " (got " + fmt_double(v) + ")");
  };
  if (!std::isfinite(alpha) || !(alpha > 0.0)) fail("alpha must be finite and > 0", alpha);
  if (!std::isfinite(beta) || !(beta >= 0.0)) fail("beta must be finite and >= 0", beta);
  if (!(theta_in >= 0.0 && theta_in <= 1.0)) fail("theta_in must lie in [0, 1]", theta_in);
  if (!(theta_out >= 0.0 && theta_out <= 1.0)) fail("theta_out must lie in [0, 1]", theta_out);
}

double edge_prob(NodeIndex i, NodeIndex j, std::uint32_t din, std::uint32_t dout,
                 const ModelParams& params) {
  if (i == 0 || i >= j)
    throw PreconditionError("edge_prob: need 1 <= i < j, got i=" + std::to_string(i) +
                            " j=" + std::to_string(j));
  if (din > j - 1 - i || dout > i - 1)
    throw PreconditionError("edge_prob: degree state out of range for (" + std::to_string(i) +
                            "," + std::to_string(j) + ")");
  const double p = edge_weight(din, dout, params) / edge_denominator(j, params);
  if (!(p >= 0.0 && p <= 1.0 + kProbabilitySlack))
    throw ValidationError("edge_prob: p=" + fmt_double(p) + " outside [0, 1]; parameters leave the valid box");
  return p;
}

GrowingNetwork::GrowingNetwork(NodeIndex n)
    : n_(n), columns_(static_cast<std::size_t>(n) + 1), deg_in_(static_cast<std::size_t>(n) + 1),
      deg_out_(static_cast<std::size_t>(n) + 1) {}

void GrowingNetwork::add_edge(NodeIndex i, NodeIndex j) {
  if (i == 0 || i >= j || j > n_)
    throw PreconditionError("add_edge: need 1 <= i < j <= n, got (" + std::to_string(i) + "," +
                            std::to_string(j) + ") with n=" + std::to_string(n_));
  auto& col = columns_[j];
  if (!col.empty() && col.back() >= i)
    throw PreconditionError("add_edge: rows of column " + std::to_string(j) +
                            " must be added in increasing order");
  col.push_back(i);
  ++deg_in_[i];
  ++deg_out_[j];
  ++edge_count_;
}

bool GrowingNetwork::has_edge(NodeIndex i, NodeIndex j) const {
  if (i > j) std::swap(i, j);
  if (i == 0 || i == j || j > n_) return false;
  const auto& col = columns_[j];
  return std::binary_search(col.begin(), col.end(), i);
}

std::vector<Dyad> GrowingNetwork::edges() const {
  std::vector<Dyad> out;
  out.reserve(edge_count_);
  for (NodeIndex j = 1; j <= n_; ++j)
    for (NodeIndex i : columns_[j]) out.push_back({i, j});
  return out;
}

bool GrowingNetwork::degrees_consistent() const {
  std::vector<std::uint32_t> din(deg_in_.size()), dout(deg_out_.size());
  std::uint64_t m = 0;
  for (NodeIndex j = 1; j <= n_; ++j) {
    for (NodeIndex i : columns_[j]) {
      ++din[i];
      ++dout[j];
      ++m;
    }
  }
  return din == deg_in_ && dout == deg_out_ && m == edge_count_;
}

GrowingNetwork sample_sequential(const ModelParams& params, NodeIndex n, const RandomSource& rng,
                                 const ColumnObserver& observer) {
  params.validate();
  if (n < 2) throw PreconditionError("sample_sequential: need n >= 2");

  GrowingNetwork net(n);
  std::vector<std::uint32_t> din(static_cast<std::size_t>(n) + 1);
  std::vector<std::uint32_t> dout(static_cast<std::size_t>(n) + 1);
  std::vector<double> scratch;
  std::vector<NodeIndex> hits;

  if (observer) observer(1, 0);
  for (NodeIndex j = 2; j <= n; ++j) {
    hits.clear();
    detail::decide_column(params, rng, j, 1, j, din.data(), dout.data(), scratch, hits);
    for (NodeIndex i : hits) {
      net.add_edge(i, j);
      ++din[i];
      ++dout[j];
    }
    if (observer) observer(j, net.edge_count());
  }
  return net;
}

}  // namespace dyadgen

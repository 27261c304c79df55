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

#include "dyadgen/dorpa.hpp"

#include <cmath>
#include <deque>
#include <random>
#include <string>
#include <vector>

#include "dyadgen/errors.hpp"

namespace dyadgen {

namespace {

// Hub parent (i, k) and Path parent (k, i) of child (i, j) are both keyed
// (i, j, k); the tag tells them apart.
inline double hub_u(const RandomSource& rng, NodeIndex i, NodeIndex k, NodeIndex j) {
  return rng.uniform(StreamTag::Hub, i, j, k);
}
inline double path_u(const RandomSource& rng, NodeIndex k, NodeIndex i, NodeIndex j) {
  return rng.uniform(StreamTag::Path, i, j, k);
}

// Column-major packing of dyads (i, j), 1 <= i < j.
inline std::size_t dyad_slot(NodeIndex i, NodeIndex j) {
  return static_cast<std::size_t>(j - 1) * (j - 2) / 2 + (i - 1);
}

void check_n(NodeIndex n, const char* who) {
  if (n < 2) throw PreconditionError(std::string(who) + ": need n >= 2");
}

}  // namespace

double dorpa_edge_prob(NodeIndex i, NodeIndex j, std::uint32_t din, std::uint32_t dout,
                       const ModelParams& params) {
  if (i == 0 || i >= j)
    throw PreconditionError("dorpa_edge_prob: need 1 <= i < j, got i=" + std::to_string(i) +
                            " j=" + std::to_string(j));
  const double rate = edge_weight(din, dout, params);
  return -std::expm1(-rate / (static_cast<double>(j) + params.beta));
}

TriggerKey hub_trigger(NodeIndex i, NodeIndex k, NodeIndex j) {
  return {make_dyad(i, k), make_dyad(i, j), ArrowType::Hub};
}

TriggerKey path_trigger(NodeIndex k, NodeIndex i, NodeIndex j) {
  return {make_dyad(k, i), make_dyad(i, j), ArrowType::Path};
}

double trigger_uniform(const RandomSource& rng, const TriggerKey& key) {
  const auto rel = classify_relation(key.parent, key.child);
  if (!rel || *rel != key.arrow || (key.arrow != ArrowType::Hub && key.arrow != ArrowType::Path))
    throw PreconditionError("trigger_uniform: key is not a Hub or Path parent of its child");
  if (key.arrow == ArrowType::Hub) return hub_u(rng, key.child.lo, key.parent.hi, key.child.hi);
  return path_u(rng, key.parent.lo, key.child.lo, key.child.hi);
}

TriggerRates trigger_rates(NodeIndex j, const ModelParams& params) {
  const double scale = static_cast<double>(j) + params.beta;
  return {-std::expm1(-params.alpha / scale), -std::expm1(-params.theta_in / scale),
          -std::expm1(-params.theta_out / scale)};
}

DorpaSample sample_dorpa_sequential(const ModelParams& params, NodeIndex n,
                                    const RandomSource& rng) {
  params.validate();
  check_n(n, "sample_dorpa_sequential");

  DorpaSample out;
  out.network = GrowingNetwork(n);
  // later[i]: neighbours k > i decided so far, increasing.
  std::vector<std::vector<NodeIndex>> later(static_cast<std::size_t>(n) + 1);
  std::vector<NodeIndex> hits;

  for (NodeIndex j = 2; j <= n; ++j) {
    const TriggerRates q = trigger_rates(j, params);
    hits.clear();
    for (NodeIndex i = 1; i < j; ++i) {
      bool fired = rng.uniform(StreamTag::Base, i, j) < q.base;
      for (NodeIndex k : later[i]) fired |= hub_u(rng, i, k, j) < q.hub;
      for (NodeIndex k : out.network.column(i)) fired |= path_u(rng, k, i, j) < q.path;
      out.child_triggers += later[i].size() + out.network.column(i).size();
      if (fired) hits.push_back(i);
    }
    out.base_triggers += j - 1;
    for (NodeIndex i : hits) {
      out.network.add_edge(i, j);
      later[i].push_back(j);
    }
  }
  return out;
}

DorpaSample sample_dorpa_events(const ModelParams& params, NodeIndex n, const RandomSource& rng,
                                PopOrder order, std::uint64_t pop_seed) {
  params.validate();
  check_n(n, "sample_dorpa_events");
  if (n > kMaxEventNodes)
    throw PreconditionError("sample_dorpa_events: n exceeds " + std::to_string(kMaxEventNodes));

  DorpaSample out;
  std::vector<DyadState> state(dyad_slot(1, n + 1) - dyad_slot(1, 2));
  std::vector<TriggerRates> rates(static_cast<std::size_t>(n) + 1);
  for (NodeIndex j = 2; j <= n; ++j) rates[j] = trigger_rates(j, params);

  std::deque<Dyad> active;
  auto activate = [&](NodeIndex i, NodeIndex j) {
    DyadState& s = state[dyad_slot(i, j)];
    if (s.status != DyadStatus::Empty) return;
    s.status = DyadStatus::Active;
    s.edge = true;
    active.push_back({i, j});
  };

  for (NodeIndex j = 2; j <= n; ++j) {
    for (NodeIndex i = 1; i < j; ++i)
      if (rng.uniform(StreamTag::Base, i, j) < rates[j].base) activate(i, j);
    out.base_triggers += j - 1;
  }

  std::mt19937_64 shuffle(pop_seed);
  while (!active.empty()) {
    Dyad d;
    switch (order) {
      case PopOrder::Fifo:
        d = active.front();
        active.pop_front();
        break;
      case PopOrder::Lifo:
        d = active.back();
        active.pop_back();
        break;
      case PopOrder::Random: {
        std::uniform_int_distribution<std::size_t> pick(0, active.size() - 1);
        std::swap(active[pick(shuffle)], active.back());
        d = active.back();
        active.pop_back();
        break;
      }
    }
    ++out.pops;
    state[dyad_slot(d.lo, d.hi)].status = DyadStatus::Completed;
    // Hub children (lo, c) and Path children (hi, c) for every c > hi.
    for (NodeIndex c = d.hi + 1; c <= n; ++c) {
      if (hub_u(rng, d.lo, d.hi, c) < rates[c].hub) activate(d.lo, c);
      if (path_u(rng, d.lo, d.hi, c) < rates[c].path) activate(d.hi, c);
    }
    out.child_triggers += 2ull * (n - d.hi);
  }

  out.network = GrowingNetwork(n);
  for (NodeIndex j = 2; j <= n; ++j)
    for (NodeIndex i = 1; i < j; ++i)
      if (state[dyad_slot(i, j)].edge) out.network.add_edge(i, j);
  return out;
}

}  // namespace dyadgen

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

#ifndef DYADGEN_DORPA_HPP
#define DYADGEN_DORPA_HPP

#include <cstdint>

#include "dyadgen/arrow_algebra.hpp"
#include "dyadgen/network.hpp"
#include "dyadgen/random.hpp"

namespace dyadgen {

// Exponential-link variant of the attachment model:
//
//   p_ij = 1 - exp(-(alpha + theta_in d_i^in + theta_out d_i^out) / (j + beta))
//
// Since exp of a sum is a product, x_ij is the OR of independent triggers:
// a base trigger with rate alpha, one Hub trigger with rate theta_in per
// edge (i, k), k < j, and one Path trigger with rate theta_out per edge
// (k, i). Each trigger of child (i, j) fires with probability
// 1 - exp(-rate / (j + beta)). Every trigger owns its own uniform, so the
// edge set does not depend on the order in which triggers are visited.

double dorpa_edge_prob(NodeIndex i, NodeIndex j, std::uint32_t din, std::uint32_t dout,
                       const ModelParams& params);

enum class DyadStatus : std::uint8_t { Empty, Active, Completed };

struct DyadState {
  DyadStatus status = DyadStatus::Empty;
  bool edge = false;
};

/// One parent-to-child trigger. arrow is Hub or Path.
struct TriggerKey {
  Dyad parent;
  Dyad child;
  ArrowType arrow;

  friend bool operator==(const TriggerKey&, const TriggerKey&) = default;
};

/// Hub parent (i, k) of child (i, j): z = k. Path parent (k, i): z = k.
TriggerKey hub_trigger(NodeIndex i, NodeIndex k, NodeIndex j);
TriggerKey path_trigger(NodeIndex k, NodeIndex i, NodeIndex j);

/// The uniform consumed by a trigger. Throws PreconditionError unless the
/// key's arrow is Hub or Path and matches classify_relation.
double trigger_uniform(const RandomSource& rng, const TriggerKey& key);

/// Per-column trigger probabilities 1 - exp(-rate / (j + beta)).
struct TriggerRates {
  double base = 0, hub = 0, path = 0;
};
TriggerRates trigger_rates(NodeIndex j, const ModelParams& params);

struct DorpaSample {
  GrowingNetwork network;
  std::uint64_t base_triggers = 0;
  std::uint64_t child_triggers = 0;  // Hub plus Path
  std::uint64_t pops = 0;            // event loop only

  std::uint64_t triggers() const { return base_triggers + child_triggers; }
};

/// Column-by-column evaluation: for each dyad in (j, i) order, OR of the base
/// trigger and the triggers of every present Hub and Path parent. Evaluates
/// every trigger (no short-circuit) so the work count matches the event loop.
DorpaSample sample_dorpa_sequential(const ModelParams& params, NodeIndex n,
                                    const RandomSource& rng);

enum class PopOrder { Fifo, Lifo, Random };

/// Event loop: fire base triggers, then repeatedly complete an Active dyad
/// and fire its Hub and Path children. `pop_seed` only affects
/// PopOrder::Random and never the result.
DorpaSample sample_dorpa_events(const ModelParams& params, NodeIndex n, const RandomSource& rng,
                                PopOrder order = PopOrder::Fifo, std::uint64_t pop_seed = 0);

/// Largest n accepted by sample_dorpa_events (one DyadState per dyad).
inline constexpr NodeIndex kMaxEventNodes = 46340;

}  // namespace dyadgen

#endif  // DYADGEN_DORPA_HPP

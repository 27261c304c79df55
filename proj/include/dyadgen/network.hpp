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

#ifndef DYADGEN_NETWORK_HPP
#define DYADGEN_NETWORK_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dyadgen/arrow_algebra.hpp"
#include "dyadgen/random.hpp"

namespace dyadgen {

/// Parameters of the affine attachment model
///
///   p_ij = (alpha + theta_in * d_i^in + theta_out * d_i^out) / (j - 2 + alpha + beta)
///
/// and of its exponential-link variant. Inside the box alpha > 0, beta >= 0,
/// theta_in, theta_out in [0, 1] every p_ij is a probability.
struct ModelParams {
  double alpha = 1.0;
  double beta = 1.0;
  double theta_in = 0.0;
  double theta_out = 0.0;

  /// Throws ValidationError naming the first violated bound.
  void validate() const;

  double theta_sum() const { return theta_in + theta_out; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Numerator of p_ij for the given degree state of node i.
inline double edge_weight(std::uint32_t din, std::uint32_t dout, const ModelParams& p) {
  return p.alpha + p.theta_in * din + p.theta_out * dout;
}

/// Denominator of p_ij for the arriving node j.
inline double edge_denominator(NodeIndex j, const ModelParams& p) {
  return (static_cast<double>(j) - 2.0) + p.alpha + p.beta;
}

/// p_ij for i < j. Throws PreconditionError on i >= j or out-of-range
/// degrees, ValidationError if the result leaves [0, 1]. Never clamps.
double edge_prob(NodeIndex i, NodeIndex j, std::uint32_t din, std::uint32_t dout,
                 const ModelParams& params);

/// Simple undirected graph on nodes 1..n, oriented by arrival order. Column j
/// holds the sorted older neighbours i < j. Degree counters follow the
/// model's convention: deg_in[i] counts edges to later nodes, deg_out[i]
/// counts edges to earlier nodes.
class GrowingNetwork {
 public:
  GrowingNetwork() = default;
  explicit GrowingNetwork(NodeIndex n);

  NodeIndex node_count() const { return n_; }
  std::uint64_t edge_count() const { return edge_count_; }

  /// Appends edge (i, j). Within a column, rows must arrive in increasing
  /// order; throws PreconditionError otherwise.
  void add_edge(NodeIndex i, NodeIndex j);
  bool has_edge(NodeIndex i, NodeIndex j) const;

  std::span<const NodeIndex> column(NodeIndex j) const { return columns_[j]; }
  std::uint32_t deg_in(NodeIndex i) const { return deg_in_[i]; }
  std::uint32_t deg_out(NodeIndex i) const { return deg_out_[i]; }
  std::uint32_t degree(NodeIndex i) const { return deg_in_[i] + deg_out_[i]; }

  /// All edges sorted by (j, i).
  std::vector<Dyad> edges() const;

  /// True when the maintained counters match a recount from the edge lists.
  bool degrees_consistent() const;

  friend bool operator==(const GrowingNetwork&, const GrowingNetwork&) = default;

 private:
  NodeIndex n_ = 0;
  std::uint64_t edge_count_ = 0;
  std::vector<std::vector<NodeIndex>> columns_;  // index 0 unused
  std::vector<std::uint32_t> deg_in_;
  std::vector<std::uint32_t> deg_out_;
};

/// Called after column j (node j's arrival) is decided, with the edge count
/// of the subnetwork on nodes 1..j.
using ColumnObserver = std::function<void(NodeIndex j, std::uint64_t edges_so_far)>;

/// Reference sampler: columns j = 2..n, rows i = 1..j-1 in increasing order,
/// x_ij = 1 iff uniform(Edge, i, j) < p_ij.
GrowingNetwork sample_sequential(const ModelParams& params, NodeIndex n, const RandomSource& rng,
                                 const ColumnObserver& observer = {});

/// Block-grid schedule report of sample_parallel.
struct BlockSchedule {
  unsigned workers = 1;
  NodeIndex block_size = 0;
  std::size_t row_blocks = 0;   // node blocks per side of the grid
  std::size_t block_count = 0;  // blocks (R, C) with R <= C
  /// Length of the longest dependency chain of executed blocks; each step is
  /// one exchange of degree counters between workers.
  std::size_t rounds = 0;
  std::vector<std::size_t> blocks_per_worker;
};

struct ParallelSample {
  GrowingNetwork network;
  BlockSchedule schedule;
};

/// Evaluates the dyad grid in blocks of block_size x block_size nodes on
/// `workers` threads. Block (R, C) runs once (R, C-1) is done and every block
/// of column-block R is done. The result equals sample_sequential exactly.
ParallelSample sample_parallel(const ModelParams& params, NodeIndex n, const RandomSource& rng,
                               unsigned workers, NodeIndex block_size);

namespace detail {

/// Decides dyads (i, j) for i in [row_begin, row_end), appending the rows
/// with an edge to `hits` in increasing order. Reads deg_in / deg_out of the
/// rows only. `scratch` is resized as needed.
void decide_column(const ModelParams& params, const RandomSource& rng, NodeIndex j,
                   NodeIndex row_begin, NodeIndex row_end, const std::uint32_t* deg_in,
                   const std::uint32_t* deg_out, std::vector<double>& scratch,
                   std::vector<NodeIndex>& hits);

/// out[k] = rng.uniform(tag, first + k, y, z) for k < count.
void fill_uniforms(const RandomSource& rng, StreamTag tag, std::uint32_t first, std::size_t count,
                   std::uint32_t y, std::uint32_t z, double* out);

}  // namespace detail

}  // namespace dyadgen

#endif  // DYADGEN_NETWORK_HPP

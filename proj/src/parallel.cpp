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

// Block-grid sampler. The upper triangle of the dyad grid is cut into
// blocks (R, C), R <= C, of block_size x block_size nodes. Decisions in
// block (R, C) read d^in of row-block R (written only along the chain
// (R, R), (R, R+1), ...) and d^out of row-block R (final once every block
// (R', R) of column-block R is done). Those two dependencies are the whole
// schedule, so any topological order reproduces the sequential result.

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <deque>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>

#include "dyadgen/errors.hpp"
#include "dyadgen/network.hpp"

namespace dyadgen {

namespace {

struct Grid {
  std::size_t side = 0;  // row blocks

  // Row-major packing of the upper triangle.
  std::size_t index(std::size_t r, std::size_t c) const {
    return r * side - r * (r - 1) / 2 + (c - r);
  }
  std::size_t count() const { return side * (side + 1) / 2; }
};

struct Block {
  std::size_t r = 0, c = 0;
  std::size_t pending = 0;  // unfinished dependencies
  std::size_t depth = 0;
  std::vector<std::pair<NodeIndex, NodeIndex>> hits;  // (j, i), column-major
};

}  // namespace

ParallelSample sample_parallel(const ModelParams& params, NodeIndex n, const RandomSource& rng,
                               unsigned workers, NodeIndex block_size) {
  params.validate();
  if (n < 2) throw PreconditionError("sample_parallel: need n >= 2");
  if (workers == 0) throw PreconditionError("sample_parallel: need at least one worker");
  if (block_size == 0) throw PreconditionError("sample_parallel: block_size must be positive");

  Grid grid{(static_cast<std::size_t>(n) + block_size - 1) / block_size};
  std::vector<Block> blocks(grid.count());
  for (std::size_t r = 0; r < grid.side; ++r) {
    for (std::size_t c = r; c < grid.side; ++c) {
      Block& b = blocks[grid.index(r, c)];
      b.r = r;
      b.c = c;
      b.pending = (c > r) ? 1 : r;
    }
  }

  auto first_node = [&](std::size_t b) { return static_cast<NodeIndex>(b * block_size + 1); };
  auto end_node = [&](std::size_t b) {
    return static_cast<NodeIndex>(std::min<std::size_t>((b + 1) * block_size, n) + 1);
  };

  std::vector<std::uint32_t> din(static_cast<std::size_t>(n) + 1);
  std::vector<std::uint32_t> dout(static_cast<std::size_t>(n) + 1);

  auto run_block = [&](Block& b, std::vector<double>& scratch, std::vector<NodeIndex>& col_hits) {
    const NodeIndex r_begin = first_node(b.r), r_end = end_node(b.r);
    for (NodeIndex j = std::max(first_node(b.c), NodeIndex{2}); j < end_node(b.c); ++j) {
      col_hits.clear();
      detail::decide_column(params, rng, j, r_begin, std::min(r_end, j), din.data(), dout.data(),
                            scratch, col_hits);
      if (col_hits.empty()) continue;
      for (NodeIndex i : col_hits) {
        ++din[i];
        b.hits.emplace_back(j, i);
      }
      // Other row-blocks of column-block C bump the same counter concurrently.
      std::atomic_ref<std::uint32_t>(dout[j]).fetch_add(static_cast<std::uint32_t>(col_hits.size()),
                                                        std::memory_order_relaxed);
    }
  };

  std::mutex mu;
  std::condition_variable cv;
  std::deque<std::size_t> ready{grid.index(0, 0)};
  std::size_t finished = 0;
  std::exception_ptr failure;
  std::vector<std::size_t> per_worker(workers);

  auto worker = [&](unsigned id) {
    std::vector<double> scratch;
    std::vector<NodeIndex> col_hits;
    std::unique_lock lock(mu);
    for (;;) {
      cv.wait(lock, [&] { return !ready.empty() || finished == blocks.size() || failure; });
      if (ready.empty()) return;
      const std::size_t idx = ready.front();
      ready.pop_front();
      lock.unlock();
      try {
        run_block(blocks[idx], scratch, col_hits);
      } catch (...) {
        lock.lock();
        if (!failure) failure = std::current_exception();
        cv.notify_all();
        return;
      }
      lock.lock();
      ++per_worker[id];
      ++finished;
      const Block& done = blocks[idx];
      auto release = [&](std::size_t next) {
        Block& nb = blocks[next];
        nb.depth = std::max(nb.depth, done.depth + 1);
        if (--nb.pending == 0) ready.push_back(next);
      };
      if (done.c + 1 < grid.side) release(grid.index(done.r, done.c + 1));
      if (done.r < done.c) release(grid.index(done.c, done.c));
      cv.notify_all();
    }
  };

  blocks[grid.index(0, 0)].depth = 1;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker, w);
  }
  if (failure) std::rethrow_exception(failure);

  ParallelSample out;
  out.network = GrowingNetwork(n);
  // Per column-block, interleave the row-blocks column by column so every
  // column receives its rows in increasing order.
  std::vector<std::size_t> cursor(grid.side);
  for (std::size_t c = 0; c < grid.side; ++c) {
    std::fill(cursor.begin(), cursor.end(), 0);
    for (NodeIndex j = first_node(c); j < end_node(c); ++j) {
      for (std::size_t r = 0; r <= c; ++r) {
        const auto& hits = blocks[grid.index(r, c)].hits;
        std::size_t& k = cursor[r];
        for (; k < hits.size() && hits[k].first == j; ++k) out.network.add_edge(hits[k].second, j);
      }
    }
  }

  BlockSchedule& s = out.schedule;
  s.workers = workers;
  s.block_size = block_size;
  s.row_blocks = grid.side;
  s.block_count = blocks.size();
  for (const Block& b : blocks) s.rounds = std::max(s.rounds, b.depth);
  s.blocks_per_worker = std::move(per_worker);
  return out;
}

}  // namespace dyadgen

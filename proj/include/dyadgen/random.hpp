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

#ifndef DYADGEN_RANDOM_HPP
#define DYADGEN_RANDOM_HPP

#include <array>
#include <cstdint>

namespace dyadgen {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as
/// easy as 1, 2, 3", SC 2011). Stateless: the output is a pure function of
/// the 128-bit counter and the 64-bit key.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

namespace detail {

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

}  // namespace detail

constexpr PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key) noexcept {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{detail::kPhiloxM0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{detail::kPhiloxM1} * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += detail::kPhiloxW0;
    key[1] += detail::kPhiloxW1;
  }
  return ctr;
}

/// Stream tags separating the independent families of per-dyad draws.
enum class StreamTag : std::uint32_t {
  Edge = 1,  // DAPA edge decision, keyed by (i, j)
  Base = 2,  // DORPA base trigger, keyed by (i, j)
  Hub = 3,   // DORPA Hub trigger, keyed by (i, k, j): parent (i,k) -> child (i,j)
  Path = 4,  // DORPA Path trigger, keyed by (k, i, j): parent (k,i) -> child (i,j)
};

/// 53-bit uniform in [0, 1) from two 32-bit words.
constexpr double to_unit_double(std::uint32_t hi, std::uint32_t lo) noexcept {
  const std::uint64_t bits = (std::uint64_t{hi} << 21) ^ (std::uint64_t{lo} >> 11);
  return static_cast<double>(bits) * 0x1.0p-53;
}

/// Counter-based random source. `uniform(tag, x, y, z)` depends only on the
/// seed and its arguments, so draws can be consumed in any order by any thread.
///
/// One Philox block yields two uniforms: x and x^1 share the counter
/// {x >> 1, y, z, tag}; even x takes words 0-1 and odd x takes words 2-3.
class RandomSource {
 public:
  constexpr explicit RandomSource(std::uint64_t seed) noexcept
      : seed_(seed),
        key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  constexpr std::uint64_t seed() const noexcept { return seed_; }
  constexpr PhiloxKey key() const noexcept { return key_; }

  constexpr double uniform(StreamTag tag, std::uint32_t x, std::uint32_t y,
                           std::uint32_t z = 0) const noexcept {
    const PhiloxCounter out =
        philox4x32({x >> 1, y, z, static_cast<std::uint32_t>(tag)}, key_);
    return (x & 1u) ? to_unit_double(out[2], out[3]) : to_unit_double(out[0], out[1]);
  }

 private:
  std::uint64_t seed_;
  PhiloxKey key_;
};

}  // namespace dyadgen

#endif  // DYADGEN_RANDOM_HPP

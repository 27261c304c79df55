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

// Hot loop of every DAPA sampler: one Philox draw per pair of dyads and one
// comparison against p_ij per dyad.

#include <cassert>

#include "dyadgen/network.hpp"

#if defined(__AVX512F__) && defined(__AVX512DQ__)
#include <immintrin.h>
#define DYADGEN_HAVE_AVX512 1
#endif

namespace dyadgen::detail {

namespace {

#ifdef DYADGEN_HAVE_AVX512

constexpr int kBatches = 4;  // independent Philox chains in flight
constexpr std::size_t kLanesPerBatch = 16;  // uniforms per 8-lane batch

// Uniforms for x = first .. first + 63, first even.
inline void philox_block64(std::uint32_t first, std::uint32_t y, std::uint32_t z,
                           std::uint32_t tag, PhiloxKey key, double* out) {
  const __m512i lo32 = _mm512_set1_epi64(0xffffffffu);
  const __m512i m0 = _mm512_set1_epi64(kPhiloxM0);
  const __m512i m1 = _mm512_set1_epi64(kPhiloxM1);
  __m512i c0[kBatches], c1[kBatches], c2[kBatches], c3[kBatches];
  const std::uint32_t pair0 = first >> 1;
  for (int b = 0; b < kBatches; ++b) {
    c0[b] = _mm512_add_epi64(_mm512_set1_epi64(static_cast<long long>(pair0) + 8 * b),
                             _mm512_setr_epi64(0, 1, 2, 3, 4, 5, 6, 7));
    c0[b] = _mm512_and_si512(c0[b], lo32);
    c1[b] = _mm512_set1_epi64(y);
    c2[b] = _mm512_set1_epi64(z);
    c3[b] = _mm512_set1_epi64(tag);
  }
  std::uint32_t k0 = key[0], k1 = key[1];
  for (int round = 0; round < 10; ++round) {
    const __m512i key0 = _mm512_set1_epi64(k0);
    const __m512i key1 = _mm512_set1_epi64(k1);
    for (int b = 0; b < kBatches; ++b) {
      const __m512i p0 = _mm512_mul_epu32(m0, c0[b]);
      const __m512i p1 = _mm512_mul_epu32(m1, c2[b]);
      const __m512i n0 = _mm512_ternarylogic_epi64(_mm512_srli_epi64(p1, 32), c1[b], key0, 0x96);
      const __m512i n2 = _mm512_ternarylogic_epi64(_mm512_srli_epi64(p0, 32), c3[b], key1, 0x96);
      c1[b] = _mm512_and_si512(p1, lo32);
      c3[b] = _mm512_and_si512(p0, lo32);
      c0[b] = n0;
      c2[b] = n2;
    }
    k0 += kPhiloxW0;
    k1 += kPhiloxW1;
  }
  const __m512d scale = _mm512_set1_pd(0x1.0p-53);
  const __m512i lo_idx = _mm512_setr_epi64(0, 8, 1, 9, 2, 10, 3, 11);
  const __m512i hi_idx = _mm512_setr_epi64(4, 12, 5, 13, 6, 14, 7, 15);
  for (int b = 0; b < kBatches; ++b) {
    const __m512i even_bits = _mm512_xor_si512(_mm512_slli_epi64(c0[b], 21), _mm512_srli_epi64(c1[b], 11));
    const __m512i odd_bits = _mm512_xor_si512(_mm512_slli_epi64(c2[b], 21), _mm512_srli_epi64(c3[b], 11));
    const __m512d even = _mm512_mul_pd(_mm512_cvtepu64_pd(even_bits), scale);
    const __m512d odd = _mm512_mul_pd(_mm512_cvtepu64_pd(odd_bits), scale);
    double* dst = out + b * kLanesPerBatch;
    _mm512_storeu_pd(dst, _mm512_permutex2var_pd(even, lo_idx, odd));
    _mm512_storeu_pd(dst + 8, _mm512_permutex2var_pd(even, hi_idx, odd));
  }
}

#endif

}  // namespace

void fill_uniforms(const RandomSource& rng, StreamTag tag, std::uint32_t first, std::size_t count,
                   std::uint32_t y, std::uint32_t z, double* out) {
  std::size_t k = 0;
#ifdef DYADGEN_HAVE_AVX512
  constexpr std::size_t kBlock = kBatches * kLanesPerBatch;
  if (count > 0 && (first & 1u)) {
    out[0] = rng.uniform(tag, first, y, z);
    k = 1;
  }
  const auto tag_word = static_cast<std::uint32_t>(tag);
  for (; k + kBlock <= count; k += kBlock)
    philox_block64(first + static_cast<std::uint32_t>(k), y, z, tag_word, rng.key(), out + k);
#endif
  for (; k < count; ++k) out[k] = rng.uniform(tag, first + static_cast<std::uint32_t>(k), y, z);
}

void decide_column(const ModelParams& params, const RandomSource& rng, NodeIndex j,
                   NodeIndex row_begin, NodeIndex row_end, const std::uint32_t* deg_in,
                   const std::uint32_t* deg_out, std::vector<double>& scratch,
                   std::vector<NodeIndex>& hits) {
  if (row_end <= row_begin) return;
  const double den = edge_denominator(j, params);
  const double alpha = params.alpha;
  const double theta_in = params.theta_in;
  const double theta_out = params.theta_out;

  NodeIndex i = row_begin;
#ifdef DYADGEN_HAVE_AVX512
  // Generate and decide 64 rows at a time so the uniforms never leave L1.
  constexpr NodeIndex kBlock = kBatches * kLanesPerBatch;
  alignas(64) double u[kBlock];
  if (i & 1u) {
    const double p = (alpha + theta_in * deg_in[i] + theta_out * deg_out[i]) / den;
    if (rng.uniform(StreamTag::Edge, i, j) < p) hits.push_back(i);
    ++i;
  }
  const auto tag_word = static_cast<std::uint32_t>(StreamTag::Edge);
  const __m512d v_alpha = _mm512_set1_pd(alpha);
  const __m512d v_tin = _mm512_set1_pd(theta_in);
  const __m512d v_tout = _mm512_set1_pd(theta_out);
  const __m512d v_den = _mm512_set1_pd(den);
  const __m512d v_slack = _mm512_set1_pd(1.0 + 0x1.0p-50);
  for (; row_end - i >= kBlock; i += kBlock) {
    philox_block64(i, j, 0, tag_word, rng.key(), u);
    for (NodeIndex k = 0; k < kBlock; k += 8) {
      const __m512d din = _mm512_cvtepu32_pd(
          _mm256_loadu_si256(reinterpret_cast<const __m256i*>(deg_in + i + k)));
      const __m512d dout = _mm512_cvtepu32_pd(
          _mm256_loadu_si256(reinterpret_cast<const __m256i*>(deg_out + i + k)));
      // Same operation order as edge_weight / edge_denominator.
      const __m512d w = _mm512_add_pd(_mm512_add_pd(v_alpha, _mm512_mul_pd(v_tin, din)),
                                      _mm512_mul_pd(v_tout, dout));
      // u < w / den implies u * den < w * (1 + 2^-50); the division only
      // runs for the rare chunks that pass this cheap filter.
      const __m512d uk = _mm512_load_pd(u + k);
      if (!_mm512_cmp_pd_mask(_mm512_mul_pd(uk, v_den), _mm512_mul_pd(w, v_slack), _CMP_LT_OQ))
        continue;
      const __m512d p = _mm512_div_pd(w, v_den);
      unsigned mask = _mm512_cmp_pd_mask(uk, p, _CMP_LT_OQ);
      while (mask) {
        hits.push_back(i + k + static_cast<NodeIndex>(__builtin_ctz(mask)));
        mask &= mask - 1;
      }
    }
  }
  (void)scratch;
#else
  (void)scratch;
#endif
  for (; i < row_end; ++i) {
    const double p = (alpha + theta_in * deg_in[i] + theta_out * deg_out[i]) / den;
    assert(p >= 0.0 && p <= 1.0 + 1e-12);
    if (rng.uniform(StreamTag::Edge, i, j) < p) hits.push_back(i);
  }
}

}  // namespace dyadgen::detail

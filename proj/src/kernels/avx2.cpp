// Copyright 2026 The LQPAT Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// AVX2 kernels, 32 output columns per iteration. Compiled with -mavx2 and only
// reached after a runtime CPU check.

#include <immintrin.h>

#include "kernels/kernels.hpp"

namespace lqpat::kernels::avx2 {
namespace {

constexpr std::size_t kLanes = 32;

inline __m256i load(const std::uint8_t* p) {
  return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
}

// Per-lane `weight` where e > f (unsigned), zero elsewhere.
inline __m256i greater_bit(__m256i e, __m256i f, __m256i weight) {
  const __m256i e_le_f = _mm256_cmpeq_epi8(_mm256_max_epu8(e, f), f);
  return _mm256_andnot_si256(e_le_f, weight);
}

inline __m256i w(int bit) { return _mm256_set1_epi8(static_cast<char>(1 << bit)); }

[[gnu::always_inline]]
inline void lqpat_block(const std::uint8_t* const rows[4], std::size_t j, std::uint8_t* a,
                        std::uint8_t* b) {
  __m256i p[4][4];
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) p[r][c] = load(rows[r] + j + c);
  }
  __m256i va = greater_bit(p[0][0], p[0][2], w(7));
  va = _mm256_or_si256(va, greater_bit(p[0][1], p[0][3], w(6)));
  va = _mm256_or_si256(va, greater_bit(p[1][0], p[1][2], w(5)));
  va = _mm256_or_si256(va, greater_bit(p[1][1], p[1][3], w(4)));
  va = _mm256_or_si256(va, greater_bit(p[0][2], p[2][2], w(3)));
  va = _mm256_or_si256(va, greater_bit(p[0][3], p[2][3], w(2)));
  va = _mm256_or_si256(va, greater_bit(p[1][2], p[3][2], w(1)));
  va = _mm256_or_si256(va, greater_bit(p[1][3], p[3][3], w(0)));

  __m256i vb = greater_bit(p[2][2], p[2][0], w(7));
  vb = _mm256_or_si256(vb, greater_bit(p[2][3], p[2][1], w(6)));
  vb = _mm256_or_si256(vb, greater_bit(p[3][2], p[3][0], w(5)));
  vb = _mm256_or_si256(vb, greater_bit(p[3][3], p[3][1], w(4)));
  vb = _mm256_or_si256(vb, greater_bit(p[2][0], p[0][0], w(3)));
  vb = _mm256_or_si256(vb, greater_bit(p[2][1], p[0][1], w(2)));
  vb = _mm256_or_si256(vb, greater_bit(p[3][0], p[1][0], w(1)));
  vb = _mm256_or_si256(vb, greater_bit(p[3][1], p[1][1], w(0)));

  _mm256_storeu_si256(reinterpret_cast<__m256i*>(a + j), va);
  _mm256_storeu_si256(reinterpret_cast<__m256i*>(b + j), vb);
}

}  // namespace

// Rows of at least one vector width finish with an overlapping final block;
// re-encoded sites are not counted twice.
std::uint64_t lqpat_row(const std::uint8_t* const rows[4], std::size_t out_cols, std::uint8_t* a,
                        std::uint8_t* b) {
  if (out_cols < kLanes) return scalar::lqpat_row(rows, out_cols, a, b);
  // local copy keeps the row pointers in registers across the stores
  const std::uint8_t* const r[4] = {rows[0], rows[1], rows[2], rows[3]};
  std::size_t j = 0;
  for (; j + kLanes <= out_cols; j += kLanes) lqpat_block(r, j, a, b);
  if (j < out_cols) lqpat_block(r, out_cols - kLanes, a, b);
  return 16 * static_cast<std::uint64_t>(out_cols);
}

namespace {

// nbr - ref > t  <=>  nbr > sat_add(ref, t) for t in [0, 255].
[[gnu::always_inline]]
inline void lbp_block(const std::uint8_t* const rows[3], std::size_t j, __m256i t,
                      std::uint8_t* out) {
  const __m256i ref = _mm256_adds_epu8(load(rows[1] + j + 1), t);
  __m256i code = greater_bit(load(rows[0] + j), ref, w(7));
  code = _mm256_or_si256(code, greater_bit(load(rows[0] + j + 1), ref, w(6)));
  code = _mm256_or_si256(code, greater_bit(load(rows[0] + j + 2), ref, w(5)));
  code = _mm256_or_si256(code, greater_bit(load(rows[1] + j + 2), ref, w(4)));
  code = _mm256_or_si256(code, greater_bit(load(rows[2] + j + 2), ref, w(3)));
  code = _mm256_or_si256(code, greater_bit(load(rows[2] + j + 1), ref, w(2)));
  code = _mm256_or_si256(code, greater_bit(load(rows[2] + j), ref, w(1)));
  code = _mm256_or_si256(code, greater_bit(load(rows[1] + j), ref, w(0)));
  _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + j), code);
}

[[gnu::always_inline]]
inline void cslbp_block(const std::uint8_t* const rows[3], std::size_t j, __m256i t,
                        std::uint8_t* out) {
  const __m256i tl = load(rows[0] + j);
  const __m256i top = load(rows[0] + j + 1);
  const __m256i tr = load(rows[0] + j + 2);
  const __m256i right = load(rows[1] + j + 2);
  const __m256i br = load(rows[2] + j + 2);
  const __m256i bottom = load(rows[2] + j + 1);
  const __m256i bl = load(rows[2] + j);
  const __m256i left = load(rows[1] + j);
  __m256i code = greater_bit(br, _mm256_adds_epu8(tl, t), w(3));
  code = _mm256_or_si256(code, greater_bit(bottom, _mm256_adds_epu8(top, t), w(2)));
  code = _mm256_or_si256(code, greater_bit(bl, _mm256_adds_epu8(tr, t), w(1)));
  code = _mm256_or_si256(code, greater_bit(left, _mm256_adds_epu8(right, t), w(0)));
  _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + j), code);
}

}  // namespace

std::uint64_t lbp_row(const std::uint8_t* const rows[3], std::size_t out_cols,
                      std::uint8_t threshold, std::uint8_t* out) {
  if (out_cols < kLanes) return scalar::lbp_row(rows, out_cols, threshold, out);
  const std::uint8_t* const r[3] = {rows[0], rows[1], rows[2]};
  const __m256i t = _mm256_set1_epi8(static_cast<char>(threshold));
  std::size_t j = 0;
  for (; j + kLanes <= out_cols; j += kLanes) lbp_block(r, j, t, out);
  if (j < out_cols) lbp_block(r, out_cols - kLanes, t, out);
  return 8 * static_cast<std::uint64_t>(out_cols);
}

std::uint64_t cslbp_row(const std::uint8_t* const rows[3], std::size_t out_cols,
                        std::uint8_t threshold, std::uint8_t* out) {
  if (out_cols < kLanes) return scalar::cslbp_row(rows, out_cols, threshold, out);
  const std::uint8_t* const r[3] = {rows[0], rows[1], rows[2]};
  const __m256i t = _mm256_set1_epi8(static_cast<char>(threshold));
  std::size_t j = 0;
  for (; j + kLanes <= out_cols; j += kLanes) cslbp_block(r, j, t, out);
  if (j < out_cols) cslbp_block(r, out_cols - kLanes, t, out);
  return 4 * static_cast<std::uint64_t>(out_cols);
}

double chi_square(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const __m256d zero = _mm256_setzero_pd();
  const std::size_t blocked = n & ~std::size_t{3};
  for (std::size_t i = 0; i < blocked; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    const __m256d vy = _mm256_loadu_pd(y + i);
    const __m256d s = _mm256_add_pd(vx, vy);
    const __m256d d = _mm256_sub_pd(vx, vy);
    const __m256d q = _mm256_div_pd(_mm256_mul_pd(d, d), s);
    // 0/0 lanes are NaN; the mask drops them.
    const __m256d keep = _mm256_cmp_pd(s, zero, _CMP_GT_OQ);
    acc = _mm256_add_pd(acc, _mm256_and_pd(q, keep));
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  double sum = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (std::size_t i = blocked; i < n; ++i) sum += scalar::chi_square_term(x[i], y[i]);
  return 0.5 * sum;
}

}  // namespace lqpat::kernels::avx2

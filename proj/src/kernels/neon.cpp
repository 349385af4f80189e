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

// AArch64 NEON kernels, 16 output columns per iteration. NEON is baseline on
// AArch64, so no runtime check is needed.

#include <arm_neon.h>

#include "kernels/kernels.hpp"

namespace lqpat::kernels::neon {
namespace {

constexpr std::size_t kLanes = 16;

inline uint8x16_t greater_bit(uint8x16_t e, uint8x16_t f, int bit) {
  return vandq_u8(vcgtq_u8(e, f), vdupq_n_u8(static_cast<std::uint8_t>(1 << bit)));
}

[[gnu::always_inline]]
inline void lqpat_block(const std::uint8_t* const rows[4], std::size_t j, std::uint8_t* a,
                        std::uint8_t* b) {
  uint8x16_t p[4][4];
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) p[r][c] = vld1q_u8(rows[r] + j + c);
  }
  uint8x16_t va = greater_bit(p[0][0], p[0][2], 7);
  va = vorrq_u8(va, greater_bit(p[0][1], p[0][3], 6));
  va = vorrq_u8(va, greater_bit(p[1][0], p[1][2], 5));
  va = vorrq_u8(va, greater_bit(p[1][1], p[1][3], 4));
  va = vorrq_u8(va, greater_bit(p[0][2], p[2][2], 3));
  va = vorrq_u8(va, greater_bit(p[0][3], p[2][3], 2));
  va = vorrq_u8(va, greater_bit(p[1][2], p[3][2], 1));
  va = vorrq_u8(va, greater_bit(p[1][3], p[3][3], 0));

  uint8x16_t vb = greater_bit(p[2][2], p[2][0], 7);
  vb = vorrq_u8(vb, greater_bit(p[2][3], p[2][1], 6));
  vb = vorrq_u8(vb, greater_bit(p[3][2], p[3][0], 5));
  vb = vorrq_u8(vb, greater_bit(p[3][3], p[3][1], 4));
  vb = vorrq_u8(vb, greater_bit(p[2][0], p[0][0], 3));
  vb = vorrq_u8(vb, greater_bit(p[2][1], p[0][1], 2));
  vb = vorrq_u8(vb, greater_bit(p[3][0], p[1][0], 1));
  vb = vorrq_u8(vb, greater_bit(p[3][1], p[1][1], 0));

  vst1q_u8(a + j, va);
  vst1q_u8(b + j, vb);
}

[[gnu::always_inline]]
inline void lbp_block(const std::uint8_t* const rows[3], std::size_t j, uint8x16_t t,
                      std::uint8_t* out) {
  const uint8x16_t ref = vqaddq_u8(vld1q_u8(rows[1] + j + 1), t);
  uint8x16_t code = greater_bit(vld1q_u8(rows[0] + j), ref, 7);
  code = vorrq_u8(code, greater_bit(vld1q_u8(rows[0] + j + 1), ref, 6));
  code = vorrq_u8(code, greater_bit(vld1q_u8(rows[0] + j + 2), ref, 5));
  code = vorrq_u8(code, greater_bit(vld1q_u8(rows[1] + j + 2), ref, 4));
  code = vorrq_u8(code, greater_bit(vld1q_u8(rows[2] + j + 2), ref, 3));
  code = vorrq_u8(code, greater_bit(vld1q_u8(rows[2] + j + 1), ref, 2));
  code = vorrq_u8(code, greater_bit(vld1q_u8(rows[2] + j), ref, 1));
  code = vorrq_u8(code, greater_bit(vld1q_u8(rows[1] + j), ref, 0));
  vst1q_u8(out + j, code);
}

[[gnu::always_inline]]
inline void cslbp_block(const std::uint8_t* const rows[3], std::size_t j, uint8x16_t t,
                        std::uint8_t* out) {
  const uint8x16_t tl = vld1q_u8(rows[0] + j);
  const uint8x16_t top = vld1q_u8(rows[0] + j + 1);
  const uint8x16_t tr = vld1q_u8(rows[0] + j + 2);
  const uint8x16_t right = vld1q_u8(rows[1] + j + 2);
  const uint8x16_t br = vld1q_u8(rows[2] + j + 2);
  const uint8x16_t bottom = vld1q_u8(rows[2] + j + 1);
  const uint8x16_t bl = vld1q_u8(rows[2] + j);
  const uint8x16_t left = vld1q_u8(rows[1] + j);
  uint8x16_t code = greater_bit(br, vqaddq_u8(tl, t), 3);
  code = vorrq_u8(code, greater_bit(bottom, vqaddq_u8(top, t), 2));
  code = vorrq_u8(code, greater_bit(bl, vqaddq_u8(tr, t), 1));
  code = vorrq_u8(code, greater_bit(left, vqaddq_u8(right, t), 0));
  vst1q_u8(out + j, code);
}

}  // namespace

// Rows of at least one vector width finish with an overlapping final block;
// re-encoded sites are not counted twice.
std::uint64_t lqpat_row(const std::uint8_t* const rows[4], std::size_t out_cols, std::uint8_t* a,
                        std::uint8_t* b) {
  if (out_cols < kLanes) return scalar::lqpat_row(rows, out_cols, a, b);
  std::size_t j = 0;
  const std::uint8_t* const r[4] = {rows[0], rows[1], rows[2], rows[3]};
  for (; j + kLanes <= out_cols; j += kLanes) lqpat_block(r, j, a, b);
  if (j < out_cols) lqpat_block(r, out_cols - kLanes, a, b);
  return 16 * static_cast<std::uint64_t>(out_cols);
}

std::uint64_t lbp_row(const std::uint8_t* const rows[3], std::size_t out_cols,
                      std::uint8_t threshold, std::uint8_t* out) {
  if (out_cols < kLanes) return scalar::lbp_row(rows, out_cols, threshold, out);
  const uint8x16_t t = vdupq_n_u8(threshold);
  std::size_t j = 0;
  const std::uint8_t* const r[3] = {rows[0], rows[1], rows[2]};
  for (; j + kLanes <= out_cols; j += kLanes) lbp_block(r, j, t, out);
  if (j < out_cols) lbp_block(r, out_cols - kLanes, t, out);
  return 8 * static_cast<std::uint64_t>(out_cols);
}

std::uint64_t cslbp_row(const std::uint8_t* const rows[3], std::size_t out_cols,
                        std::uint8_t threshold, std::uint8_t* out) {
  if (out_cols < kLanes) return scalar::cslbp_row(rows, out_cols, threshold, out);
  const uint8x16_t t = vdupq_n_u8(threshold);
  std::size_t j = 0;
  const std::uint8_t* const r[3] = {rows[0], rows[1], rows[2]};
  for (; j + kLanes <= out_cols; j += kLanes) cslbp_block(r, j, t, out);
  if (j < out_cols) cslbp_block(r, out_cols - kLanes, t, out);
  return 4 * static_cast<std::uint64_t>(out_cols);
}

// Two float64x2 accumulators stand in for the four reference lanes.
double chi_square(const double* x, const double* y, std::size_t n) {
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  const float64x2_t zero = vdupq_n_f64(0.0);
  auto term = [&zero](float64x2_t vx, float64x2_t vy) {
    const float64x2_t s = vaddq_f64(vx, vy);
    const float64x2_t d = vsubq_f64(vx, vy);
    const float64x2_t q = vdivq_f64(vmulq_f64(d, d), s);
    const uint64x2_t keep = vcgtq_f64(s, zero);
    return vreinterpretq_f64_u64(vandq_u64(vreinterpretq_u64_f64(q), keep));
  };
  const std::size_t blocked = n & ~std::size_t{3};
  for (std::size_t i = 0; i < blocked; i += 4) {
    lo = vaddq_f64(lo, term(vld1q_f64(x + i), vld1q_f64(y + i)));
    hi = vaddq_f64(hi, term(vld1q_f64(x + i + 2), vld1q_f64(y + i + 2)));
  }
  double sum = (vgetq_lane_f64(lo, 0) + vgetq_lane_f64(lo, 1)) +
               (vgetq_lane_f64(hi, 0) + vgetq_lane_f64(hi, 1));
  for (std::size_t i = blocked; i < n; ++i) sum += scalar::chi_square_term(x[i], y[i]);
  return 0.5 * sum;
}

}  // namespace lqpat::kernels::neon

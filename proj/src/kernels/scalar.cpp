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

// Reference kernels. These call the public bit encoders once per comparison
// and are the definition the vector variants are tested against.

#include "kernels/kernels.hpp"
#include "lqpat/descriptor.hpp"

namespace lqpat::kernels::scalar {

std::uint64_t lqpat_row(const std::uint8_t* const rows[4], std::size_t out_cols, std::uint8_t* a,
                        std::uint8_t* b) {
  std::uint64_t comparisons = 0;
  auto c = [&comparisons](std::uint8_t e, std::uint8_t f) -> unsigned {
    ++comparisons;
    return encode_order(e, f);
  };
  const std::uint8_t* r0 = rows[0];
  const std::uint8_t* r1 = rows[1];
  const std::uint8_t* r2 = rows[2];
  const std::uint8_t* r3 = rows[3];
  for (std::size_t j = 0; j < out_cols; ++j) {
    const std::uint8_t* p0 = r0 + j;
    const std::uint8_t* p1 = r1 + j;
    const std::uint8_t* p2 = r2 + j;
    const std::uint8_t* p3 = r3 + j;
    // red -> green
    const unsigned a_hi =
        c(p0[0], p0[2]) << 7 | c(p0[1], p0[3]) << 6 | c(p1[0], p1[2]) << 5 | c(p1[1], p1[3]) << 4;
    // green -> blue
    const unsigned a_lo =
        c(p0[2], p2[2]) << 3 | c(p0[3], p2[3]) << 2 | c(p1[2], p3[2]) << 1 | c(p1[3], p3[3]);
    // blue -> purple
    const unsigned b_hi =
        c(p2[2], p2[0]) << 7 | c(p2[3], p2[1]) << 6 | c(p3[2], p3[0]) << 5 | c(p3[3], p3[1]) << 4;
    // purple -> red
    const unsigned b_lo =
        c(p2[0], p0[0]) << 3 | c(p2[1], p0[1]) << 2 | c(p3[0], p1[0]) << 1 | c(p3[1], p1[1]);
    a[j] = static_cast<std::uint8_t>(a_hi | a_lo);
    b[j] = static_cast<std::uint8_t>(b_hi | b_lo);
  }
  return comparisons;
}

std::uint64_t lbp_row(const std::uint8_t* const rows[3], std::size_t out_cols,
                      std::uint8_t threshold, std::uint8_t* out) {
  const std::uint8_t* top = rows[0];
  const std::uint8_t* mid = rows[1];
  const std::uint8_t* bot = rows[2];
  std::uint64_t comparisons = 0;
  for (std::size_t j = 0; j < out_cols; ++j) {
    const std::uint8_t ref = mid[j + 1];
    const std::uint8_t ring[8] = {top[j],     top[j + 1], top[j + 2], mid[j + 2],
                                  bot[j + 2], bot[j + 1], bot[j],     mid[j]};
    unsigned code = 0;
    for (int k = 0; k < 8; ++k) {
      code = code << 1 | encode_threshold(ref, ring[k], threshold);
      ++comparisons;
    }
    out[j] = static_cast<std::uint8_t>(code);
  }
  return comparisons;
}

std::uint64_t cslbp_row(const std::uint8_t* const rows[3], std::size_t out_cols,
                        std::uint8_t threshold, std::uint8_t* out) {
  const std::uint8_t* top = rows[0];
  const std::uint8_t* mid = rows[1];
  const std::uint8_t* bot = rows[2];
  std::uint64_t comparisons = 0;
  for (std::size_t j = 0; j < out_cols; ++j) {
    const std::uint8_t ring[8] = {top[j],     top[j + 1], top[j + 2], mid[j + 2],
                                  bot[j + 2], bot[j + 1], bot[j],     mid[j]};
    unsigned code = 0;
    for (int k = 0; k < 4; ++k) {
      code = code << 1 | encode_threshold(ring[k], ring[k + 4], threshold);
      ++comparisons;
    }
    out[j] = static_cast<std::uint8_t>(code);
  }
  return comparisons;
}

double chi_square_term(double x, double y) {
  const double s = x + y;
  if (!(s > 0.0)) return 0.0;
  const double d = x - y;
  return (d * d) / s;
}

double chi_square(const double* x, const double* y, std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t blocked = n & ~std::size_t{3};
  for (std::size_t i = 0; i < blocked; i += 4) {
    for (std::size_t k = 0; k < 4; ++k) lane[k] += chi_square_term(x[i + k], y[i + k]);
  }
  double sum = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (std::size_t i = blocked; i < n; ++i) sum += chi_square_term(x[i], y[i]);
  return 0.5 * sum;
}

}  // namespace lqpat::kernels::scalar

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

#pragma once

// Row kernels shared by the scalar reference and the vector variants.
//
// Every encoder kernel fills one output row and returns the number of pixel
// comparisons it evaluated, counted at the comparison sites (one per lane for
// vector compares). Vector kernels finish the row tail with the scalar kernel.

#include <cstddef>
#include <cstdint>

#include "lqpat/simd.hpp"

namespace lqpat::kernels {

/// rows[0..3] point at image rows i..i+3 (zero-based), each at least
/// out_cols + 3 bytes long. Writes out_cols codes to a and b.
using LqpatRowFn = std::uint64_t (*)(const std::uint8_t* const rows[4], std::size_t out_cols,
                                     std::uint8_t* a, std::uint8_t* b);

/// rows[0..2] are the top, center and bottom rows; each at least
/// out_cols + 2 bytes long. `threshold` is already clamped to [0, 255].
using NeighborRowFn = std::uint64_t (*)(const std::uint8_t* const rows[3], std::size_t out_cols,
                                        std::uint8_t threshold, std::uint8_t* out);

/// 0.5 * sum (x-y)^2 / (x+y), 0/0 terms dropped. All variants accumulate in
/// four interleaved lanes, reduce as (l0+l1)+(l2+l3), then add the tail in
/// order, so results are bit-identical across ISAs.
using ChiSquareFn = double (*)(const double* x, const double* y, std::size_t n);

struct KernelTable {
  simd::Isa isa;
  LqpatRowFn lqpat_row;
  NeighborRowFn lbp_row;
  NeighborRowFn cslbp_row;
  ChiSquareFn chi_square;
};

const KernelTable& table_for(simd::Isa isa);

namespace scalar {
std::uint64_t lqpat_row(const std::uint8_t* const rows[4], std::size_t out_cols, std::uint8_t* a,
                        std::uint8_t* b);
std::uint64_t lbp_row(const std::uint8_t* const rows[3], std::size_t out_cols,
                      std::uint8_t threshold, std::uint8_t* out);
std::uint64_t cslbp_row(const std::uint8_t* const rows[3], std::size_t out_cols,
                        std::uint8_t threshold, std::uint8_t* out);
double chi_square(const double* x, const double* y, std::size_t n);
double chi_square_term(double x, double y);
}  // namespace scalar

#if defined(LQPAT_HAVE_AVX2_KERNELS)
namespace avx2 {
std::uint64_t lqpat_row(const std::uint8_t* const rows[4], std::size_t out_cols, std::uint8_t* a,
                        std::uint8_t* b);
std::uint64_t lbp_row(const std::uint8_t* const rows[3], std::size_t out_cols,
                      std::uint8_t threshold, std::uint8_t* out);
std::uint64_t cslbp_row(const std::uint8_t* const rows[3], std::size_t out_cols,
                        std::uint8_t threshold, std::uint8_t* out);
double chi_square(const double* x, const double* y, std::size_t n);
}  // namespace avx2
#endif

#if defined(LQPAT_HAVE_NEON_KERNELS)
namespace neon {
std::uint64_t lqpat_row(const std::uint8_t* const rows[4], std::size_t out_cols, std::uint8_t* a,
                        std::uint8_t* b);
std::uint64_t lbp_row(const std::uint8_t* const rows[3], std::size_t out_cols,
                      std::uint8_t threshold, std::uint8_t* out);
std::uint64_t cslbp_row(const std::uint8_t* const rows[3], std::size_t out_cols,
                        std::uint8_t threshold, std::uint8_t* out);
double chi_square(const double* x, const double* y, std::size_t n);
}  // namespace neon
#endif

}  // namespace lqpat::kernels

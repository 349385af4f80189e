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

#include <algorithm>
#include <cstdlib>
#include <string>

#include "kernels/kernels.hpp"
#include "lqpat/error.hpp"

namespace lqpat {
namespace simd {
namespace {

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(LQPAT_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::kNeon:
#if defined(LQPAT_HAVE_NEON_KERNELS)
      return true;
#else
      return false;
#endif
  }
  return false;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "unknown";
}

std::optional<Isa> parse_isa(std::string_view name) {
  for (Isa isa : {Isa::kScalar, Isa::kAvx2, Isa::kNeon}) {
    if (isa_name(isa) == name) return isa;
  }
  return std::nullopt;
}

const std::vector<Isa>& available_isas() {
  static const std::vector<Isa> isas = [] {
    std::vector<Isa> out;
    for (Isa isa : {Isa::kScalar, Isa::kAvx2, Isa::kNeon}) {
      if (cpu_supports(isa)) out.push_back(isa);
    }
    return out;
  }();
  return isas;
}

Isa active_isa() {
  const auto& isas = available_isas();
  if (const char* env = std::getenv("LQPAT_SIMD"); env != nullptr && *env != '\0') {
    const auto requested = parse_isa(env);
    if (!requested) throw ArgumentError(std::string("LQPAT_SIMD: unknown ISA '") + env + "'");
    if (std::find(isas.begin(), isas.end(), *requested) == isas.end()) {
      throw ArgumentError(std::string("LQPAT_SIMD: ISA '") + env +
                          "' is not available on this machine");
    }
    return *requested;
  }
  return isas.back();
}

}  // namespace simd

namespace kernels {

const KernelTable& table_for(simd::Isa isa) {
  static const KernelTable kScalar{simd::Isa::kScalar, scalar::lqpat_row, scalar::lbp_row,
                                   scalar::cslbp_row, scalar::chi_square};
  const auto& isas = simd::available_isas();
  if (std::find(isas.begin(), isas.end(), isa) == isas.end()) {
    throw ArgumentError("kernel set '" + std::string(simd::isa_name(isa)) +
                        "' is not available on this machine");
  }
  switch (isa) {
    case simd::Isa::kScalar:
      return kScalar;
    case simd::Isa::kAvx2:
#if defined(LQPAT_HAVE_AVX2_KERNELS)
    {
      static const KernelTable kAvx2{simd::Isa::kAvx2, avx2::lqpat_row, avx2::lbp_row,
                                     avx2::cslbp_row, avx2::chi_square};
      return kAvx2;
    }
#else
      break;
#endif
    case simd::Isa::kNeon:
#if defined(LQPAT_HAVE_NEON_KERNELS)
    {
      static const KernelTable kNeon{simd::Isa::kNeon, neon::lqpat_row, neon::lbp_row,
                                     neon::cslbp_row, neon::chi_square};
      return kNeon;
    }
#else
      break;
#endif
  }
  throw ArgumentError("kernel set '" + std::string(simd::isa_name(isa)) +
                      "' is not compiled into this build");
}

}  // namespace kernels
}  // namespace lqpat

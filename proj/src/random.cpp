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

#include "lqpat/random.hpp"

#include "lqpat/error.hpp"

namespace lqpat {

std::uint64_t PortableRng::uniform_below(std::uint64_t n) {
  if (n == 0) throw ArgumentError("uniform_below: n must be > 0");
  // (2^64 - n) mod n == 2^64 mod n
  const std::uint64_t reject_from = 0 - ((0 - n) % n);
  for (;;) {
    const std::uint64_t v = engine_();
    if (reject_from == 0 || v < reject_from) return v % n;
  }
}

}  // namespace lqpat

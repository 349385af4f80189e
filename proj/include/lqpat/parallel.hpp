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

#include <cstddef>
#include <functional>

namespace lqpat::parallel {

/// Worker cap from LQPAT_THREADS (unset or 0 = hardware concurrency).
/// Throws ArgumentError on a malformed value.
std::size_t worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads using a
/// static contiguous partition. Bodies must write only to slots owned by
/// their index. If bodies throw, the exception from the lowest index is
/// rethrown after all workers join.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace lqpat::parallel

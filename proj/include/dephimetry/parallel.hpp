// Copyright 2026 The Dephimetry Authors
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
#include <cstdint>
#include <functional>

namespace dephimetry {

/// Monte Carlo work is cut into blocks of this many shots. Block b draws from
/// its own generator seeded with derive_seed(seed, b), so results depend on
/// (seed, shots) only, never on the number of worker threads.
inline constexpr std::size_t kShotBlockSize = 8192;

/// Hardware concurrency, capped by the DEPHIMETRY_THREADS environment variable.
std::size_t worker_count();

/// Runs fn(0..count-1) on up to worker_count() threads. The first exception
/// thrown by any task is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)> &fn);

/// SplitMix64 mix of (seed, stream).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

} // namespace dephimetry

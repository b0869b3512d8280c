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
#include <ostream>
#include <string>
#include <vector>

#include "dephimetry/bounds.hpp"
#include "dephimetry/sweep_config.hpp"

namespace dephimetry::cli {

/// Process exit codes.
enum ExitCode : int {
    kSuccess = 0,
    kUsage = 1,
    kViolation = 2,
    kNumericalFailure = 3,
};

/// Largest subsystem count for which bound rows build the explicit state.
/// Beyond it F_rho takes its analytic value and f_rho_bar is omitted.
inline constexpr std::size_t kExactMaxN = 10;

struct GridPoint {
    Family family = Family::Identity;
    StateKind state = StateKind::Ghz;
    std::size_t n = 1;
    double alpha = 0.0;
    double two_beta2 = 0.0;
};

/// BoundReport for one grid point. Shared by `bound`, `sweep` and `figure`.
BoundReport bound_row(const GridPoint &p);

/// 1, 2, ..., up to max_n on a logarithmic grid with the given number of
/// points per decade (deduplicated, always containing 1 and max_n).
std::vector<std::size_t> log_grid(std::size_t max_n, std::size_t per_decade);

/// Entry point of the `dephimetry` tool. Returns the process exit code.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace dephimetry::cli

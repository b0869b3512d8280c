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
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "dephimetry/bounds.hpp"
#include "dephimetry/errors.hpp"

namespace dephimetry {

/// Initial state of a bound computation. `Heisenberg` stands for the qubit
/// resource cap F_rho = N^2 without an explicit state.
enum class StateKind { Ghz, ProductPlus, Heisenberg };

std::string_view to_string(StateKind s);
/// Accepts "ghz", "product-plus", "heisenberg".
StateKind parse_state(std::string_view s);

/// Malformed sweep configuration; the message carries the line number.
class ConfigError : public InvalidArgument {
  public:
    ConfigError(std::size_t line, const std::string &what);
    [[nodiscard]] std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

/// Flat `key = value` file, `#` starts a comment, lists are comma separated.
/// Keys: n, two_beta2 (required), alpha (default 0), family (default
/// identity), state (default ghz). A key given with no value is an empty
/// list and yields an empty grid.
struct SweepConfig {
    std::vector<Family> family;
    std::vector<StateKind> state;
    std::vector<std::size_t> n;
    std::vector<double> alpha;
    std::vector<double> two_beta2;

    /// Number of grid points (product of the list sizes).
    [[nodiscard]] std::size_t size() const;
};

SweepConfig parse_sweep_config(std::istream &in);

} // namespace dephimetry

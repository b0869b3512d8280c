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

#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "dephimetry/bounds.hpp"

namespace dephimetry {

/// Column order shared by every BoundReport CSV.
inline constexpr const char *kBoundReportHeader =
    "family,n,alpha,two_beta2,delta2_c,f_rho,f_rho_bar,main_bound,error_bound,reference_g";

/// %.17g, or inf / -inf / nan.
std::string format_double(double v);
/// Empty string for nullopt.
std::string format_optional(const std::optional<double> &v);

/// One CSV line (with trailing newline) in kBoundReportHeader order.
void write_csv_row(std::ostream &out, const BoundReport &r);

/// JSON object with the CSV fields in the same order, then "violation".
/// Non-finite numbers are written as strings, missing values as null.
nlohmann::ordered_json to_json(const BoundReport &r);

/// JSON value for a double: number when finite, "inf"/"-inf"/"nan" otherwise.
nlohmann::ordered_json json_number(double v);

} // namespace dephimetry

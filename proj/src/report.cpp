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

#include "dephimetry/report.hpp"

#include <cmath>
#include <cstdio>

namespace dephimetry {

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_optional(const std::optional<double> &v) {
    return v ? format_double(*v) : std::string{};
}

void write_csv_row(std::ostream &out, const BoundReport &r) {
    out << to_string(r.family) << ',' << r.n << ',' << format_optional(r.alpha) << ','
        << format_optional(r.two_beta2) << ',' << format_double(r.delta2_c) << ','
        << format_double(r.f_rho) << ',' << format_optional(r.f_rho_bar) << ','
        << format_double(r.main_bound_value) << ',' << format_double(r.error_bound_value) << ','
        << format_optional(r.reference_g_value) << '\n';
}

nlohmann::ordered_json json_number(double v) {
    if (std::isfinite(v)) {
        return v;
    }
    return format_double(v);
}

nlohmann::ordered_json to_json(const BoundReport &r) {
    auto opt = [](const std::optional<double> &v) -> nlohmann::ordered_json {
        return v ? json_number(*v) : nlohmann::ordered_json(nullptr);
    };
    nlohmann::ordered_json j;
    j["family"] = std::string(to_string(r.family));
    j["n"] = r.n;
    j["alpha"] = opt(r.alpha);
    j["two_beta2"] = opt(r.two_beta2);
    j["delta2_c"] = json_number(r.delta2_c);
    j["f_rho"] = json_number(r.f_rho);
    j["f_rho_bar"] = opt(r.f_rho_bar);
    j["main_bound"] = json_number(r.main_bound_value);
    j["error_bound"] = json_number(r.error_bound_value);
    j["reference_g"] = opt(r.reference_g_value);
    j["violation"] = r.violation;
    return j;
}

} // namespace dephimetry

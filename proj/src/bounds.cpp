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

#include "dephimetry/bounds.hpp"

#include <cmath>
#include <limits>

#include "dephimetry/dephasing.hpp"
#include "dephimetry/errors.hpp"
#include "dephimetry/fisher.hpp"

namespace dephimetry {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double heisenberg_cap(std::size_t n) {
    const double nn = static_cast<double>(n);
    return nn * nn;
}

} // namespace

std::string_view to_string(Family f) {
    switch (f) {
    case Family::C1:
        return "c1";
    case Family::C2:
        return "c2";
    case Family::Identity:
        return "identity";
    case Family::Custom:
        return "custom";
    }
    return "custom";
}

Family parse_family(std::string_view s) {
    if (s == "c1") {
        return Family::C1;
    }
    if (s == "c2") {
        return Family::C2;
    }
    if (s == "identity") {
        return Family::Identity;
    }
    if (s == "custom") {
        return Family::Custom;
    }
    throw InvalidArgument("unknown covariance family '" + std::string(s) + "'");
}

double main_bound(double delta2, double f_rho) {
    if (!(delta2 >= 0.0) || std::isinf(delta2) || !(f_rho >= 0.0)) {
        throw InvalidArgument("main_bound: need finite delta2 >= 0 and f_rho >= 0");
    }
    if (delta2 == 0.0 && f_rho == 0.0) {
        throw InvalidArgument("main_bound: delta2 and f_rho cannot both be zero");
    }
    const double inv_f = std::isinf(f_rho) ? 0.0 : 1.0 / f_rho;
    return 1.0 / (delta2 + inv_f);
}

double error_bound(double delta2, double f_rho) {
    if (!(f_rho > 0.0)) {
        throw InvalidArgument("error_bound: f_rho must be > 0");
    }
    if (!(delta2 >= 0.0) || std::isinf(delta2)) {
        throw InvalidArgument("error_bound: delta2 must be finite and >= 0");
    }
    const double inv_f = std::isinf(f_rho) ? 0.0 : 1.0 / f_rho;
    return delta2 + inv_f;
}

double reference_bound_g(std::size_t n, double two_beta2) {
    if (n == 0 || !(two_beta2 >= 0.0)) {
        throw InvalidArgument("reference_bound_g: need n >= 1 and two_beta2 >= 0");
    }
    return std::expm1(two_beta2) / static_cast<double>(n);
}

double family_delta2(Family family, std::size_t n, double two_beta2, double alpha) {
    switch (family) {
    case Family::C1:
        return delta2_c1_closed(n, two_beta2, alpha);
    case Family::C2:
        if (alpha == 1.0) {
            delta2_c1_closed(n, two_beta2, alpha); // argument validation
            return two_beta2;
        }
        return delta2_c2_closed(n, two_beta2, alpha);
    case Family::Identity:
        return delta2_c1_closed(n, two_beta2, 0.0);
    case Family::Custom:
        break;
    }
    throw InvalidArgument("family_delta2: custom covariances have no closed form");
}

BoundReport verify_bound(const DensityMatrix &rho, const GeneratorSpec &gen,
                         const CovarianceMatrix &c) {
    BoundReport r;
    r.n = gen.site_count();
    r.delta2_c = delta2_c(c);
    r.f_rho = qfi(rho, gen);
    r.f_rho_bar = qfi(dephase(rho, gen, c), gen);
    if (r.delta2_c == 0.0 && r.f_rho == 0.0) {
        r.main_bound_value = 0.0;
        r.error_bound_value = kInf;
    } else {
        r.main_bound_value = main_bound(r.delta2_c, r.f_rho);
        r.error_bound_value = r.f_rho > 0.0 ? error_bound(r.delta2_c, r.f_rho) : kInf;
    }
    r.violation = *r.f_rho_bar > r.main_bound_value + kBoundTolerance;
    return r;
}

double crossover_boundary(std::size_t n) {
    if (n == 0) {
        throw InvalidArgument("crossover_boundary: n must be >= 1");
    }
    // Both bounds share the factor 1/N; the sign of
    // (2 beta^2 + 1/N) - (e^{2 beta^2} - 1) decides which is larger.
    const double inv_n = 1.0 / static_cast<double>(n);
    auto margin = [inv_n](double x) { return x + inv_n - std::expm1(x); };
    double lo = 0.0;
    double hi = std::sqrt(2.0 * inv_n);
    while (margin(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
    }
    while (hi - lo > 1e-6 * hi) {
        const double mid = 0.5 * (lo + hi);
        (margin(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

CrossoverRegion crossover(std::span<const std::size_t> ns, std::span<const double> two_beta2s) {
    if (ns.empty() || two_beta2s.empty()) {
        throw InvalidArgument("crossover: grids must be non-empty");
    }
    CrossoverRegion region;
    region.grid.reserve(ns.size() * two_beta2s.size());
    for (std::size_t n : ns) {
        const double nn = static_cast<double>(n);
        for (double x : two_beta2s) {
            const double ours = error_bound(x / nn, heisenberg_cap(n));
            const double theirs = reference_bound_g(n, x);
            region.grid.push_back({n, x, ours, theirs, ours > theirs});
        }
        const double b = crossover_boundary(n);
        const double approx = 1.0 / std::sqrt(2.0 * nn);
        region.boundary.push_back({n, b, approx, b / approx});
    }
    return region;
}

ScalingRecord asymptotics(Family family, double alpha, double two_beta2,
                          std::span<const std::size_t> ns) {
    if (family != Family::C1 && family != Family::C2) {
        throw InvalidArgument("asymptotics: family must be c1 or c2");
    }
    if (family == Family::C2 && !(alpha < 1.0)) {
        throw InvalidArgument("asymptotics: c2 needs alpha < 1");
    }
    if (ns.empty()) {
        throw InvalidArgument("asymptotics: n list must be non-empty");
    }
    ScalingRecord rec{family, alpha, two_beta2, {}, 0.0, 0.0, 0.0};
    for (std::size_t n : ns) {
        const double d2 = family_delta2(family, n, two_beta2, alpha);
        const double eb = error_bound(d2, heisenberg_cap(n));
        const double scaled = family == Family::C1 ? eb : static_cast<double>(n) * eb;
        rec.points.push_back({n, d2, eb, scaled});
    }
    rec.analytic_limit = family == Family::C1 ? two_beta2 * alpha
                                              : two_beta2 * (1.0 + alpha) / (1.0 - alpha);

    // Ordinary least squares of scaled on (1, 1/N).
    double s1 = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto &p : rec.points) {
        const double x = 1.0 / static_cast<double>(p.n);
        s1 += 1.0;
        sx += x;
        sy += p.scaled;
        sxx += x * x;
        sxy += x * p.scaled;
    }
    const double det = s1 * sxx - sx * sx;
    if (std::abs(det) > 1e-300) {
        rec.fitted_limit = (sxx * sy - sx * sxy) / det;
    } else {
        rec.fitted_limit = sy / s1;
    }
    rec.residual = std::abs(rec.fitted_limit - rec.analytic_limit);
    return rec;
}

} // namespace dephimetry

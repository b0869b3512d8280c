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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dephimetry/core.hpp"
#include "dephimetry/covariance.hpp"

namespace dephimetry {

enum class Family { C1, C2, Identity, Custom };

std::string_view to_string(Family f);
/// Accepts "c1", "c2", "identity", "custom".
Family parse_family(std::string_view s);

/// One (state, C) configuration with its Fisher informations and bounds.
struct BoundReport {
    Family family = Family::Custom;
    std::size_t n = 0;
    std::optional<double> alpha;
    std::optional<double> two_beta2;
    double delta2_c = 0.0;
    double f_rho = 0.0;
    std::optional<double> f_rho_bar;
    double main_bound_value = 0.0;
    double error_bound_value = 0.0;
    std::optional<double> reference_g_value;
    /// f_rho_bar exceeded main_bound_value by more than kBoundTolerance.
    bool violation = false;
};

inline constexpr double kBoundTolerance = 1e-8;

/// Upper bound on the dephased QFI, (delta2 + 1/f_rho)^{-1}. f_rho may be
/// +infinity (noise-only limit).
double main_bound(double delta2, double f_rho);

/// Lower bound on the local error of any locally unbiased estimator,
/// delta2 + 1/f_rho.
double error_bound(double delta2, double f_rho);

/// Independent-dephasing error bound of the earlier literature,
/// (e^{2 beta^2} - 1) / N.
double reference_bound_g(std::size_t n, double two_beta2);

/// delta2_c of a named family without building the matrix: the closed forms,
/// with alpha = 1 mapped to the collective value 2 beta^2 for both families.
double family_delta2(Family family, std::size_t n, double two_beta2, double alpha);

/// Computes F_rho, F_rho_bar = qfi(dephase(rho, C)) and delta2_c, and checks
/// F_rho_bar <= main bound + 1e-8. A violation is flagged, not thrown.
BoundReport verify_bound(const DensityMatrix &rho, const GeneratorSpec &gen,
                         const CovarianceMatrix &c);

struct CrossoverPoint {
    std::size_t n;
    double two_beta2;
    double independent_bound; ///< error_bound(2 beta^2 / N, N^2)
    double reference_bound;   ///< reference_bound_g(N, 2 beta^2)
    bool independent_tighter; ///< independent_bound > reference_bound
};

struct BoundaryPoint {
    std::size_t n;
    /// 2 beta^2 at which both bounds coincide; below it the
    /// independent-dephasing bound is the larger one.
    double two_beta2;
    /// (2N)^{-1/2}, the large-N approximation of the boundary.
    double approximation;
    double ratio; ///< two_beta2 / approximation
};

struct CrossoverRegion {
    std::vector<CrossoverPoint> grid; ///< n-major
    std::vector<BoundaryPoint> boundary;
};

/// Bisection in 2 beta^2 to relative tolerance 1e-6.
double crossover_boundary(std::size_t n);

CrossoverRegion crossover(std::span<const std::size_t> ns, std::span<const double> two_beta2s);

struct ScalingPoint {
    std::size_t n;
    double delta2;
    double error_bound; ///< with F_rho = N^2
    double scaled;      ///< error_bound for C1, N * error_bound for C2
};

struct ScalingRecord {
    Family family;
    double alpha;
    double two_beta2;
    std::vector<ScalingPoint> points;
    /// Least-squares fit scaled = a + b / N; this is a.
    double fitted_limit;
    /// 2 beta^2 alpha for C1, 2 beta^2 (1 + alpha) / (1 - alpha) for C2.
    double analytic_limit;
    /// |fitted_limit - analytic_limit|
    double residual;
};

/// Large-N behaviour of the error bound under the Heisenberg cap F_rho = N^2.
ScalingRecord asymptotics(Family family, double alpha, double two_beta2,
                          std::span<const std::size_t> ns);

} // namespace dephimetry

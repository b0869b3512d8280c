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

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "dephimetry/core.hpp"

namespace dephimetry::testing {

struct GaussHermiteRule {
    std::vector<double> nodes;   ///< standard normal abscissae
    std::vector<double> weights; ///< sum to one
};

/// Golub-Welsch for the probabilists' weight exp(-x^2/2) / sqrt(2 pi).
inline GaussHermiteRule gauss_hermite(std::size_t points) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(points, points);
    for (std::size_t k = 1; k < points; ++k) {
        j(k, k - 1) = j(k - 1, k) = std::sqrt(static_cast<double>(k));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
    GaussHermiteRule rule;
    for (std::size_t k = 0; k < points; ++k) {
        const auto i = static_cast<Eigen::Index>(k);
        rule.nodes.push_back(es.eigenvalues()(i));
        const double v = es.eigenvectors()(0, i);
        rule.weights.push_back(v * v);
    }
    return rule;
}

/// E[f(mean + L z)] over z ~ N(0, I_n) on a tensor grid, with L L^T = C.
inline double gaussian_expectation(const RealVector &mean, const RealMatrix &chol,
                                   const GaussHermiteRule &rule,
                                   const std::function<double(const RealVector &)> &f) {
    const auto n = static_cast<std::size_t>(mean.size());
    const std::size_t q = rule.nodes.size();
    std::size_t total = 1;
    for (std::size_t k = 0; k < n; ++k) {
        total *= q;
    }
    RealVector z(static_cast<Eigen::Index>(n));
    double sum = 0.0;
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        double w = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            z(static_cast<Eigen::Index>(k)) = rule.nodes[rest % q];
            w *= rule.weights[rest % q];
            rest /= q;
        }
        sum += w * f(mean + chol * z);
    }
    return sum;
}

/// Tr(U(phi) rho U(phi)^dag Pi) with U(phi) = exp(-i sum_j phi_j H_j), computed directly.
inline double phase_resolved_probability(const ComplexMatrix &rho, const RealMatrix &local,
                                         const ComplexMatrix &effect, const RealVector &phi) {
    const RealVector e = local * phi;
    double p = 0.0;
    for (Eigen::Index m = 0; m < rho.rows(); ++m) {
        for (Eigen::Index n = 0; n < rho.cols(); ++n) {
            const Complex rotated = rho(m, n) * std::polar(1.0, -(e(m) - e(n)));
            p += (rotated * effect(n, m)).real();
        }
    }
    return p;
}

} // namespace dephimetry::testing

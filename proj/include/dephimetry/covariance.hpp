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

#include "dephimetry/core.hpp"

namespace dephimetry {

/// Covariance matrix C of the N random phases.
///
/// Singular matrices are accepted; the only singular form the downstream
/// estimators understand is the collective one, C = c * (all-ones), which is
/// the alpha -> 1 limit of both analytic families.
class CovarianceMatrix {
  public:
    /// Validates symmetry (1e-12) and positive semidefiniteness (-1e-10).
    static CovarianceMatrix from_matrix(const RealMatrix &c);
    /// two_beta2 * identity.
    static CovarianceMatrix independent(std::size_t n, double two_beta2);
    /// two_beta2 * (all-ones).
    static CovarianceMatrix collective(std::size_t n, double two_beta2);

    [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(c_.rows()); }
    [[nodiscard]] const RealMatrix &matrix() const { return c_; }
    [[nodiscard]] double min_eigenvalue() const { return min_eig_; }
    [[nodiscard]] double max_eigenvalue() const { return max_eig_; }

    /// Smallest eigenvalue below 1e-12 times the largest (or C == 0).
    [[nodiscard]] bool is_singular() const;
    /// C == c * (all-ones) for some c >= 0.
    [[nodiscard]] bool is_collective() const { return collective_; }

    /// Symmetric PSD square root S with S * S = C (negative round-off
    /// eigenvalues clamped to zero).
    [[nodiscard]] RealMatrix square_root() const;

  private:
    CovarianceMatrix(RealMatrix c, double min_eig, double max_eig, bool collective)
        : c_(std::move(c)), min_eig_(min_eig), max_eig_(max_eig), collective_(collective) {}

    RealMatrix c_;
    double min_eig_;
    double max_eig_;
    bool collective_;
};

/// Weights gamma of the minimum-variance average phase sum_j gamma_j phi_j.
struct WeightVector {
    RealVector gamma;
};

/// Constant correlations: diagonal 2 beta^2, off-diagonal 2 beta^2 alpha.
CovarianceMatrix build_c1(std::size_t n, double two_beta2, double alpha);

/// Exponentially decaying correlations: entries 2 beta^2 alpha^{|j-k|}.
CovarianceMatrix build_c2(std::size_t n, double two_beta2, double alpha);

/// (1^T C^{-1} 1)^{-1}, the variance of the optimally weighted phase average.
/// Collective C returns its common entry. Other singular C throw
/// SingularCovariance.
double delta2_c(const CovarianceMatrix &c);

/// gamma = delta2_c * C^{-1} 1; uniform for collective C.
WeightVector weights(const CovarianceMatrix &c);

double delta2_c1_closed(std::size_t n, double two_beta2, double alpha);

/// Closed form for the exponential family, alpha in [0, 1).
double delta2_c2_closed(std::size_t n, double two_beta2, double alpha);

} // namespace dephimetry

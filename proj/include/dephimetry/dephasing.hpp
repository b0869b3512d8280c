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

#include "dephimetry/core.hpp"
#include "dephimetry/covariance.hpp"

namespace dephimetry {

/// Zero-mean correlated Gaussian dephasing. Entry (m,n) is multiplied by the
/// Gaussian characteristic function exp(-delta^T C delta / 2) with
/// delta_j = h_j(m_j) - h_j(n_j). Populations are untouched.
DensityMatrix dephase(const DensityMatrix &rho, const GeneratorSpec &gen,
                      const CovarianceMatrix &c);

struct MonteCarloDephasing {
    DensityMatrix state;
    /// Per-entry standard error of the sample mean, sqrt((Var Re + Var Im) / shots).
    RealMatrix std_error;
    std::size_t shots;
};

/// Sample average of e^{-i sum_j phi_j H_j} rho e^{i sum_j phi_j H_j} over
/// phi ~ N(0, C). Independent check on dephase().
MonteCarloDephasing dephase_monte_carlo(const DensityMatrix &rho, const GeneratorSpec &gen,
                                        const CovarianceMatrix &c, std::size_t shots,
                                        std::uint64_t seed);

/// -i[H, rho_bar], the phase derivative of the encoded state at the origin.
HermitianOperator derivative_state(const DensityMatrix &rho_bar, const GeneratorSpec &gen);

/// -i[H_site, rho_bar].
HermitianOperator site_derivative_state(const DensityMatrix &rho_bar, const GeneratorSpec &gen,
                                        std::size_t site);

/// C - delta2_c(C) * (all-ones): covariance of the phases conditioned on the
/// optimally weighted average phase. Throws NumericalError if it is not PSD.
CovarianceMatrix conditional_covariance(const CovarianceMatrix &c);

/// State conditioned on the weighted average phase taking the value phi:
/// encode_phase(dephase(rho, C'), phi) with C' the conditional covariance.
/// The conditional mean of every phase is phi whatever the prior mean, so
/// prior_mean does not change the result.
DensityMatrix conditional_dephased_state(const DensityMatrix &rho, const GeneratorSpec &gen,
                                         const CovarianceMatrix &c, double phi,
                                         double prior_mean);

} // namespace dephimetry

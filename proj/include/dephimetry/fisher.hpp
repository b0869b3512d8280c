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
#include <vector>

#include "dephimetry/core.hpp"

namespace dephimetry {

/// Modes with lambda_m + lambda_n at or below this fraction of the largest
/// eigenvalue of rho are outside the support and drop out of the SLD.
inline constexpr double kRankTolerance = 1e-10;
/// Outcomes with probability at or below this are excluded from Fisher sums.
inline constexpr double kProbabilityFloor = 1e-12;

/// Finite POVM: PSD effects summing to the identity.
class Povm {
  public:
    /// Validates each effect (PSD within -1e-10) and completeness (1e-10).
    static Povm from_effects(std::vector<ComplexMatrix> effects);
    /// Rank-one projectors onto the columns of a unitary.
    static Povm projective(const ComplexMatrix &basis);
    /// The trivial single-outcome measurement.
    static Povm identity(std::size_t dim);
    /// Joint measurement: all products a_x (x) b_y, a-index major.
    static Povm tensor(const Povm &a, const Povm &b);

    [[nodiscard]] std::size_t size() const { return effects_.size(); }
    [[nodiscard]] std::size_t dim() const;
    [[nodiscard]] const std::vector<ComplexMatrix> &effects() const { return effects_; }
    [[nodiscard]] const ComplexMatrix &operator[](std::size_t x) const { return effects_[x]; }

  private:
    explicit Povm(std::vector<ComplexMatrix> effects) : effects_(std::move(effects)) {}
    std::vector<ComplexMatrix> effects_;
};

enum class PauliAxis { X, Y, Z };

/// Columns are the +1 and -1 eigenvectors of the chosen Pauli matrix.
ComplexMatrix pauli_eigenbasis(PauliAxis axis);

/// Re Tr(op * effect) for every effect.
std::vector<double> outcome_traces(const ComplexMatrix &op, const Povm &povm);

/// Symmetric logarithmic derivative L with L rho + rho L = -2i[H, rho],
/// restricted to the support of rho. Computational basis.
HermitianOperator sld(const DensityMatrix &rho, const GeneratorSpec &gen);

/// Quantum Fisher information Tr(rho L^2).
double qfi(const DensityMatrix &rho, const GeneratorSpec &gen);

/// Fisher information of the outcome distribution Tr(rho_phi Pi_x) with
/// respect to phi at phi = 0.
double classical_fi(const DensityMatrix &rho, const GeneratorSpec &gen, const Povm &povm);

/// Projective measurement in an SLD eigenbasis. Degenerate SLD eigenspaces are
/// rotated to diagonalize H inside them, ordered by (SLD eigenvalue, H value).
Povm optimal_povm(const DensityMatrix &rho, const GeneratorSpec &gen);

} // namespace dephimetry

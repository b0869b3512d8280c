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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace dephimetry {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kPsdTolerance = 1e-10;

/// Commuting local generators H = sum_j H_j, each H_j diagonal in the
/// computational product basis and given by its eigenvalue list.
///
/// Basis index m enumerates product states |m_1 ... m_N> with site 0 as the
/// most significant digit, i.e. the ordering of kron(site_0, site_1, ...).
class GeneratorSpec {
  public:
    explicit GeneratorSpec(std::vector<std::vector<double>> site_spectra);

    /// N qubits with H_j = sigma^z / 2, so |0> has energy +1/2.
    static GeneratorSpec qubits(std::size_t n);

    [[nodiscard]] std::size_t site_count() const { return spectra_.size(); }
    [[nodiscard]] std::size_t dim() const { return dim_; }
    [[nodiscard]] std::span<const double> site_spectrum(std::size_t site) const;

    /// (m, j) entry is h_j(m_j).
    [[nodiscard]] const RealMatrix &local_energies() const { return local_; }
    /// E_m = sum_j h_j(m_j).
    [[nodiscard]] const RealVector &total_energies() const { return total_; }

    /// Dense diagonal matrix of H.
    [[nodiscard]] ComplexMatrix hamiltonian() const;
    /// Dense diagonal matrix of H_j embedded in the full space.
    [[nodiscard]] ComplexMatrix site_hamiltonian(std::size_t site) const;

  private:
    std::vector<std::vector<double>> spectra_;
    std::size_t dim_ = 1;
    RealMatrix local_;
    RealVector total_;
};

class HermitianOperator {
  public:
    /// Validates |M - M^dagger| <= 1e-12 and stores (M + M^dagger) / 2.
    static HermitianOperator from_matrix(const ComplexMatrix &m);

    [[nodiscard]] const ComplexMatrix &matrix() const { return m_; }
    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }

  private:
    explicit HermitianOperator(ComplexMatrix m) : m_(std::move(m)) {}
    ComplexMatrix m_;
};

/// Hermitian, positive semidefinite, unit-trace matrix.
class DensityMatrix {
  public:
    /// Full validation: Hermiticity, trace and spectrum. O(dim^3).
    static DensityMatrix from_matrix(const ComplexMatrix &m);
    /// |psi><psi| / <psi|psi>.
    static DensityMatrix from_pure(const ComplexVector &psi);
    /// For matrices that are states by construction (channel outputs).
    /// Only symmetrizes; no spectral check.
    static DensityMatrix from_matrix_unchecked(const ComplexMatrix &m);

    [[nodiscard]] const ComplexMatrix &matrix() const { return m_; }
    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
    [[nodiscard]] double purity() const;
    [[nodiscard]] RealVector eigenvalues() const;

  private:
    explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {}
    ComplexMatrix m_;
};

/// Projector onto (|0...0> + |1...1>)/sqrt(2) over n qubits.
DensityMatrix ghz_state(std::size_t n);

/// (|+><+|)^{(x) n}.
DensityMatrix product_plus_state(std::size_t n);

/// e^{-i phi H} rho e^{i phi H}; entry (m,n) picks up e^{-i phi (E_m - E_n)}.
DensityMatrix encode_phase(const DensityMatrix &rho, const GeneratorSpec &gen, double phi);

/// Tr(rho op^2) - Tr(rho op)^2.
double variance(const HermitianOperator &op, const DensityMatrix &rho);

/// H = sum_j H_j as a Hermitian operator.
HermitianOperator generator_operator(const GeneratorSpec &gen);

/// Throws InvalidArgument unless the state lives on the generator's space.
void require_same_dim(const DensityMatrix &rho, const GeneratorSpec &gen);

} // namespace dephimetry

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

#include "dephimetry/core.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "dephimetry/errors.hpp"

namespace dephimetry {

namespace {

constexpr std::size_t kMaxQubits = 24;

double hermitian_deviation(const ComplexMatrix &m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

ComplexMatrix symmetrized(const ComplexMatrix &m) { return (m + m.adjoint()) * 0.5; }

void require_square(const ComplexMatrix &m, const char *what) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
        throw InvalidArgument(std::string(what) + ": matrix must be square and non-empty");
    }
}

} // namespace

GeneratorSpec::GeneratorSpec(std::vector<std::vector<double>> site_spectra)
    : spectra_(std::move(site_spectra)) {
    if (spectra_.empty()) {
        throw InvalidArgument("GeneratorSpec: at least one site is required");
    }
    for (const auto &s : spectra_) {
        if (s.size() < 2) {
            throw InvalidArgument("GeneratorSpec: every site needs dimension >= 2");
        }
        for (double h : s) {
            if (!std::isfinite(h)) {
                throw InvalidArgument("GeneratorSpec: eigenvalues must be finite");
            }
        }
        if (dim_ > (std::size_t{1} << 30) / s.size()) {
            throw InvalidArgument("GeneratorSpec: total dimension too large");
        }
        dim_ *= s.size();
    }

    const auto n = spectra_.size();
    local_.resize(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(n));
    for (std::size_t m = 0; m < dim_; ++m) {
        std::size_t rest = m;
        for (std::size_t j = n; j-- > 0;) {
            const auto d = spectra_[j].size();
            local_(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(j)) = spectra_[j][rest % d];
            rest /= d;
        }
    }
    total_ = local_.rowwise().sum();
}

GeneratorSpec GeneratorSpec::qubits(std::size_t n) {
    if (n == 0 || n > kMaxQubits) {
        throw InvalidArgument("GeneratorSpec::qubits: n must be in [1, 24]");
    }
    return GeneratorSpec(std::vector<std::vector<double>>(n, {0.5, -0.5}));
}

std::span<const double> GeneratorSpec::site_spectrum(std::size_t site) const {
    if (site >= spectra_.size()) {
        throw InvalidArgument("GeneratorSpec: site index out of range");
    }
    return spectra_[site];
}

ComplexMatrix GeneratorSpec::hamiltonian() const {
    return total_.cast<Complex>().asDiagonal();
}

ComplexMatrix GeneratorSpec::site_hamiltonian(std::size_t site) const {
    if (site >= spectra_.size()) {
        throw InvalidArgument("GeneratorSpec: site index out of range");
    }
    return local_.col(static_cast<Eigen::Index>(site)).cast<Complex>().asDiagonal();
}

HermitianOperator HermitianOperator::from_matrix(const ComplexMatrix &m) {
    require_square(m, "HermitianOperator");
    if (hermitian_deviation(m) > kHermitianTolerance) {
        throw InvalidArgument("HermitianOperator: matrix is not Hermitian");
    }
    return HermitianOperator(symmetrized(m));
}

DensityMatrix DensityMatrix::from_matrix(const ComplexMatrix &m) {
    require_square(m, "DensityMatrix");
    if (hermitian_deviation(m) > kHermitianTolerance) {
        throw InvalidArgument("DensityMatrix: matrix is not Hermitian");
    }
    ComplexMatrix h = symmetrized(m);
    if (std::abs(h.trace().real() - 1.0) > kTraceTolerance) {
        throw InvalidArgument("DensityMatrix: trace differs from 1");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw NumericalError("DensityMatrix: eigensolver failed");
    }
    if (es.eigenvalues().minCoeff() < -kPsdTolerance) {
        throw InvalidArgument("DensityMatrix: matrix has a negative eigenvalue");
    }
    return DensityMatrix(std::move(h));
}

DensityMatrix DensityMatrix::from_pure(const ComplexVector &psi) {
    const double norm = psi.norm();
    if (psi.size() == 0 || !(norm > 0.0)) {
        throw InvalidArgument("DensityMatrix::from_pure: vector must be non-zero");
    }
    const ComplexVector v = psi / norm;
    return DensityMatrix(symmetrized(v * v.adjoint()));
}

DensityMatrix DensityMatrix::from_matrix_unchecked(const ComplexMatrix &m) {
    require_square(m, "DensityMatrix");
    return DensityMatrix(symmetrized(m));
}

double DensityMatrix::purity() const {
    // Tr(rho^2) = sum |rho_mn|^2 for Hermitian rho.
    return m_.squaredNorm();
}

RealVector DensityMatrix::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m_, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw NumericalError("DensityMatrix: eigensolver failed");
    }
    return es.eigenvalues();
}

DensityMatrix ghz_state(std::size_t n) {
    if (n == 0 || n > kMaxQubits) {
        throw InvalidArgument("ghz_state: n must be in [1, 24]");
    }
    const Eigen::Index dim = Eigen::Index{1} << n;
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    m(0, 0) = m(0, dim - 1) = m(dim - 1, 0) = m(dim - 1, dim - 1) = 0.5;
    return DensityMatrix::from_matrix_unchecked(m);
}

DensityMatrix product_plus_state(std::size_t n) {
    if (n == 0 || n > kMaxQubits) {
        throw InvalidArgument("product_plus_state: n must be in [1, 24]");
    }
    const Eigen::Index dim = Eigen::Index{1} << n;
    return DensityMatrix::from_matrix_unchecked(
        ComplexMatrix::Constant(dim, dim, Complex(1.0 / static_cast<double>(dim), 0.0)));
}

void require_same_dim(const DensityMatrix &rho, const GeneratorSpec &gen) {
    if (rho.dim() != gen.dim()) {
        throw InvalidArgument("dimension mismatch: state has dim " + std::to_string(rho.dim()) +
                              ", generator has dim " + std::to_string(gen.dim()));
    }
}

DensityMatrix encode_phase(const DensityMatrix &rho, const GeneratorSpec &gen, double phi) {
    require_same_dim(rho, gen);
    const auto &e = gen.total_energies();
    ComplexVector u(e.size());
    for (Eigen::Index m = 0; m < e.size(); ++m) {
        u(m) = std::polar(1.0, -phi * e(m));
    }
    const ComplexMatrix out = u.asDiagonal() * rho.matrix() * u.conjugate().asDiagonal();
    return DensityMatrix::from_matrix_unchecked(out);
}

double variance(const HermitianOperator &op, const DensityMatrix &rho) {
    if (op.dim() != rho.dim()) {
        throw InvalidArgument("variance: dimension mismatch");
    }
    const ComplexMatrix r_op = rho.matrix() * op.matrix();
    const double mean = r_op.trace().real();
    const double second = (r_op * op.matrix()).trace().real();
    return second - mean * mean;
}

HermitianOperator generator_operator(const GeneratorSpec &gen) {
    return HermitianOperator::from_matrix(gen.hamiltonian());
}

} // namespace dephimetry

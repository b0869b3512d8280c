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

#include "dephimetry/fisher.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "dephimetry/dephasing.hpp"
#include "dephimetry/errors.hpp"

namespace dephimetry {

namespace {

constexpr double kPovmTolerance = 1e-10;
constexpr double kDegeneracyTolerance = 1e-9;

/// rho = V diag(lambda) V^dagger and -i[H, rho] expressed in that eigenbasis.
struct SpectralDerivative {
    RealVector lambda;
    ComplexMatrix basis;
    ComplexMatrix derivative;
    double cutoff;
};

SpectralDerivative spectral_derivative(const DensityMatrix &rho, const GeneratorSpec &gen) {
    require_same_dim(rho, gen);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.matrix());
    if (es.info() != Eigen::Success) {
        throw NumericalError("SLD: eigensolver failed");
    }
    const ComplexMatrix &v = es.eigenvectors();
    ComplexMatrix d = v.adjoint() * derivative_state(rho, gen).matrix() * v;
    const double cutoff = kRankTolerance * std::max(0.0, es.eigenvalues().maxCoeff());
    return {es.eigenvalues(), v, std::move(d), cutoff};
}

} // namespace

Povm Povm::from_effects(std::vector<ComplexMatrix> effects) {
    if (effects.empty()) {
        throw InvalidArgument("Povm: at least one effect is required");
    }
    const Eigen::Index dim = effects.front().rows();
    ComplexMatrix total = ComplexMatrix::Zero(dim, dim);
    for (auto &e : effects) {
        if (e.rows() != dim || e.cols() != dim || dim == 0) {
            throw InvalidArgument("Povm: effects must be square and of equal size");
        }
        if ((e - e.adjoint()).cwiseAbs().maxCoeff() > kPovmTolerance) {
            throw InvalidArgument("Povm: effect is not Hermitian");
        }
        e = (e + e.adjoint()) * 0.5;
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(e, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() < -kPovmTolerance) {
            throw InvalidArgument("Povm: effect is not positive semidefinite");
        }
        total += e;
    }
    if ((total - ComplexMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff() > kPovmTolerance) {
        throw InvalidArgument("Povm: effects do not sum to the identity");
    }
    return Povm(std::move(effects));
}

Povm Povm::projective(const ComplexMatrix &basis) {
    std::vector<ComplexMatrix> effects;
    effects.reserve(static_cast<std::size_t>(basis.cols()));
    for (Eigen::Index k = 0; k < basis.cols(); ++k) {
        effects.emplace_back(basis.col(k) * basis.col(k).adjoint());
    }
    return from_effects(std::move(effects));
}

Povm Povm::identity(std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    return from_effects({ComplexMatrix::Identity(d, d)});
}

Povm Povm::tensor(const Povm &a, const Povm &b) {
    std::vector<ComplexMatrix> effects;
    effects.reserve(a.size() * b.size());
    for (const auto &ea : a.effects()) {
        for (const auto &eb : b.effects()) {
            ComplexMatrix k(ea.rows() * eb.rows(), ea.cols() * eb.cols());
            for (Eigen::Index i = 0; i < ea.rows(); ++i) {
                for (Eigen::Index j = 0; j < ea.cols(); ++j) {
                    k.block(i * eb.rows(), j * eb.cols(), eb.rows(), eb.cols()) = ea(i, j) * eb;
                }
            }
            effects.push_back(std::move(k));
        }
    }
    return from_effects(std::move(effects));
}

std::size_t Povm::dim() const { return static_cast<std::size_t>(effects_.front().rows()); }

ComplexMatrix pauli_eigenbasis(PauliAxis axis) {
    const double s = 1.0 / std::sqrt(2.0);
    ComplexMatrix b(2, 2);
    switch (axis) {
    case PauliAxis::X:
        b << s, s, s, -s;
        break;
    case PauliAxis::Y:
        b << Complex(s, 0), Complex(s, 0), Complex(0, s), Complex(0, -s);
        break;
    case PauliAxis::Z:
        b << 1, 0, 0, 1;
        break;
    }
    return b;
}

std::vector<double> outcome_traces(const ComplexMatrix &op, const Povm &povm) {
    if (static_cast<std::size_t>(op.rows()) != povm.dim()) {
        throw InvalidArgument("POVM dimension does not match the operator");
    }
    std::vector<double> out;
    out.reserve(povm.size());
    for (const auto &e : povm.effects()) {
        out.push_back(op.transpose().cwiseProduct(e).sum().real());
    }
    return out;
}

HermitianOperator sld(const DensityMatrix &rho, const GeneratorSpec &gen) {
    const auto s = spectral_derivative(rho, gen);
    const Eigen::Index dim = s.lambda.size();
    ComplexMatrix l = ComplexMatrix::Zero(dim, dim);
    for (Eigen::Index n = 0; n < dim; ++n) {
        for (Eigen::Index m = 0; m < dim; ++m) {
            const double denom = s.lambda(m) + s.lambda(n);
            if (denom > s.cutoff) {
                l(m, n) = 2.0 * s.derivative(m, n) / denom;
            }
        }
    }
    const ComplexMatrix out = s.basis * l * s.basis.adjoint();
    return HermitianOperator::from_matrix((out + out.adjoint()) * 0.5);
}

double qfi(const DensityMatrix &rho, const GeneratorSpec &gen) {
    const auto s = spectral_derivative(rho, gen);
    const Eigen::Index dim = s.lambda.size();
    double f = 0.0;
    for (Eigen::Index n = 0; n < dim; ++n) {
        for (Eigen::Index m = 0; m < dim; ++m) {
            const double denom = s.lambda(m) + s.lambda(n);
            if (denom > s.cutoff) {
                f += 2.0 * std::norm(s.derivative(m, n)) / denom;
            }
        }
    }
    return f;
}

double classical_fi(const DensityMatrix &rho, const GeneratorSpec &gen, const Povm &povm) {
    require_same_dim(rho, gen);
    const auto p = outcome_traces(rho.matrix(), povm);
    const auto d = outcome_traces(derivative_state(rho, gen).matrix(), povm);
    double f = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) {
        if (p[x] > kProbabilityFloor) {
            f += d[x] * d[x] / p[x];
        }
    }
    return f;
}

Povm optimal_povm(const DensityMatrix &rho, const GeneratorSpec &gen) {
    const ComplexMatrix l = sld(rho, gen).matrix();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(l);
    if (es.info() != Eigen::Success) {
        throw NumericalError("optimal_povm: eigensolver failed");
    }
    const RealVector &values = es.eigenvalues();
    ComplexMatrix basis = es.eigenvectors();
    const ComplexMatrix h = gen.hamiltonian();
    const double tol =
        kDegeneracyTolerance * std::max(1.0, values.cwiseAbs().maxCoeff());

    const Eigen::Index dim = values.size();
    for (Eigen::Index start = 0; start < dim;) {
        Eigen::Index stop = start + 1;
        while (stop < dim && values(stop) - values(stop - 1) <= tol) {
            ++stop;
        }
        const Eigen::Index width = stop - start;
        if (width > 1) {
            const ComplexMatrix block = basis.middleCols(start, width);
            const ComplexMatrix restricted = block.adjoint() * h * block;
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> sub((restricted + restricted.adjoint()) *
                                                             0.5);
            basis.middleCols(start, width) = block * sub.eigenvectors();
        }
        start = stop;
    }
    return Povm::projective(basis);
}

} // namespace dephimetry

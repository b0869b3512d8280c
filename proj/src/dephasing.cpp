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

#include "dephimetry/dephasing.hpp"

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "dephimetry/errors.hpp"
#include "dephimetry/parallel.hpp"

namespace dephimetry {

namespace {

void require_sites(const GeneratorSpec &gen, const CovarianceMatrix &c) {
    if (gen.site_count() != c.size()) {
        throw InvalidArgument("covariance size " + std::to_string(c.size()) +
                              " does not match site count " + std::to_string(gen.site_count()));
    }
}

struct BlockSums {
    ComplexMatrix sum;
    RealMatrix sum_sq; // |sample|^2 accumulated entrywise
};

} // namespace

DensityMatrix dephase(const DensityMatrix &rho, const GeneratorSpec &gen,
                      const CovarianceMatrix &c) {
    require_same_dim(rho, gen);
    require_sites(gen, c);

    // delta^T C delta = a_m + a_n - 2 e_m^T C e_n with a_m = e_m^T C e_m.
    const RealMatrix &e = gen.local_energies();
    const RealMatrix ec = e * c.matrix();
    const RealMatrix gram = ec * e.transpose();
    const RealVector a = gram.diagonal();

    const Eigen::Index dim = e.rows();
    ComplexMatrix out = rho.matrix();
    for (Eigen::Index n = 0; n < dim; ++n) {
        for (Eigen::Index m = 0; m < dim; ++m) {
            if (m == n) {
                continue;
            }
            const double q = std::max(0.0, a(m) + a(n) - 2.0 * gram(m, n));
            out(m, n) *= std::exp(-0.5 * q);
        }
    }
    return DensityMatrix::from_matrix_unchecked(out);
}

MonteCarloDephasing dephase_monte_carlo(const DensityMatrix &rho, const GeneratorSpec &gen,
                                        const CovarianceMatrix &c, std::size_t shots,
                                        std::uint64_t seed) {
    require_same_dim(rho, gen);
    require_sites(gen, c);
    if (shots == 0) {
        throw InvalidArgument("dephase_monte_carlo: shots must be >= 1");
    }

    const RealMatrix root = c.square_root();
    const RealMatrix &e = gen.local_energies();
    const auto dim = static_cast<Eigen::Index>(rho.dim());
    const auto sites = static_cast<Eigen::Index>(c.size());
    const std::size_t blocks = (shots + kShotBlockSize - 1) / kShotBlockSize;

    std::vector<BlockSums> partial(blocks);
    parallel_for(blocks, [&](std::size_t b) {
        std::mt19937_64 rng(derive_seed(seed, b));
        std::normal_distribution<double> normal;
        BlockSums s{ComplexMatrix::Zero(dim, dim), RealMatrix::Zero(dim, dim)};
        RealVector z(sites);
        ComplexVector u(dim);
        const std::size_t end = std::min(shots, (b + 1) * kShotBlockSize);
        for (std::size_t shot = b * kShotBlockSize; shot < end; ++shot) {
            for (Eigen::Index j = 0; j < sites; ++j) {
                z(j) = normal(rng);
            }
            const RealVector theta = e * (root * z);
            for (Eigen::Index m = 0; m < dim; ++m) {
                u(m) = std::polar(1.0, -theta(m));
            }
            const ComplexMatrix sample =
                u.asDiagonal() * rho.matrix() * u.conjugate().asDiagonal();
            s.sum += sample;
            s.sum_sq += sample.cwiseAbs2();
        }
        partial[b] = std::move(s);
    });

    ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
    RealMatrix sum_sq = RealMatrix::Zero(dim, dim);
    for (const auto &p : partial) {
        sum += p.sum;
        sum_sq += p.sum_sq;
    }
    const double count = static_cast<double>(shots);
    const ComplexMatrix mean = sum / count;
    RealMatrix err = RealMatrix::Zero(dim, dim);
    if (shots > 1) {
        // Unbiased variance of the complex samples: E|X|^2 - |E X|^2.
        const RealMatrix var =
            ((sum_sq / count - mean.cwiseAbs2()) * (count / (count - 1.0))).cwiseMax(0.0);
        err = (var / count).cwiseSqrt();
    }
    return {DensityMatrix::from_matrix_unchecked(mean), std::move(err), shots};
}

HermitianOperator derivative_state(const DensityMatrix &rho_bar, const GeneratorSpec &gen) {
    require_same_dim(rho_bar, gen);
    const RealVector &e = gen.total_energies();
    const Eigen::Index dim = e.size();
    ComplexMatrix d(dim, dim);
    for (Eigen::Index n = 0; n < dim; ++n) {
        for (Eigen::Index m = 0; m < dim; ++m) {
            d(m, n) = Complex(0.0, -(e(m) - e(n))) * rho_bar.matrix()(m, n);
        }
    }
    return HermitianOperator::from_matrix(d);
}

HermitianOperator site_derivative_state(const DensityMatrix &rho_bar, const GeneratorSpec &gen,
                                        std::size_t site) {
    require_same_dim(rho_bar, gen);
    if (site >= gen.site_count()) {
        throw InvalidArgument("site_derivative_state: site index out of range");
    }
    const auto h = gen.local_energies().col(static_cast<Eigen::Index>(site));
    const Eigen::Index dim = h.size();
    ComplexMatrix d(dim, dim);
    for (Eigen::Index n = 0; n < dim; ++n) {
        for (Eigen::Index m = 0; m < dim; ++m) {
            d(m, n) = Complex(0.0, -(h(m) - h(n))) * rho_bar.matrix()(m, n);
        }
    }
    return HermitianOperator::from_matrix(d);
}

CovarianceMatrix conditional_covariance(const CovarianceMatrix &c) {
    const double d2 = delta2_c(c);
    const auto n = static_cast<Eigen::Index>(c.size());
    RealMatrix reduced = c.matrix() - RealMatrix::Constant(n, n, d2);
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(reduced, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() < -kPsdTolerance) {
        throw NumericalError("conditional covariance is not positive semidefinite");
    }
    // Clear round-off below zero so the result passes covariance validation.
    if (es.eigenvalues().minCoeff() < 0.0) {
        Eigen::SelfAdjointEigenSolver<RealMatrix> full(reduced);
        const RealVector clamped = full.eigenvalues().cwiseMax(0.0);
        reduced = full.eigenvectors() * clamped.asDiagonal() * full.eigenvectors().transpose();
        reduced = (reduced + reduced.transpose()) * 0.5;
    }
    return CovarianceMatrix::from_matrix(reduced);
}

DensityMatrix conditional_dephased_state(const DensityMatrix &rho, const GeneratorSpec &gen,
                                         const CovarianceMatrix &c, double phi,
                                         double /*prior_mean*/) {
    return encode_phase(dephase(rho, gen, conditional_covariance(c)), gen, phi);
}

} // namespace dephimetry

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

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "dephimetry/core.hpp"
#include "dephimetry/covariance.hpp"
#include "dephimetry/fisher.hpp"

namespace dephimetry::testing {

/// Test-only random instance generators with a fixed-seed engine.
class Sampler {
  public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0) {
        return std::uniform_real_distribution<double>(lo, hi)(rng_);
    }
    std::size_t index(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }

    ComplexMatrix ginibre(std::size_t rows, std::size_t cols) {
        std::normal_distribution<double> g;
        ComplexMatrix m(rows, cols);
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            for (Eigen::Index j = 0; j < m.cols(); ++j) {
                m(i, j) = Complex(g(rng_), g(rng_));
            }
        }
        return m;
    }

    DensityMatrix pure_state(std::size_t dim) {
        return DensityMatrix::from_pure(ginibre(dim, 1).col(0));
    }

    /// Random mixed state of full or reduced rank.
    DensityMatrix mixed_state(std::size_t dim, std::size_t rank = 0) {
        if (rank == 0) {
            rank = dim;
        }
        const ComplexMatrix g = ginibre(dim, rank);
        ComplexMatrix rho = g * g.adjoint();
        rho /= rho.trace().real();
        return DensityMatrix::from_matrix(rho);
    }

    /// Random PSD covariance scaled so typical entries are O(scale).
    CovarianceMatrix covariance(std::size_t n, double scale = 1.0) {
        std::normal_distribution<double> g;
        RealMatrix a(n, n);
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            for (Eigen::Index j = 0; j < a.cols(); ++j) {
                a(i, j) = g(rng_);
            }
        }
        RealMatrix c = a * a.transpose() * (scale / static_cast<double>(n));
        c += 1e-3 * scale * RealMatrix::Identity(n, n);
        return CovarianceMatrix::from_matrix(c);
    }

    /// Random POVM: S^{-1/2} G_k S^{-1/2} with S = sum G_k, G_k = A_k A_k^dag.
    Povm povm(std::size_t dim, std::size_t outcomes) {
        std::vector<ComplexMatrix> g;
        ComplexMatrix s = ComplexMatrix::Zero(dim, dim);
        for (std::size_t k = 0; k < outcomes; ++k) {
            const ComplexMatrix a = ginibre(dim, 1 + index(0, dim - 1));
            // identity shift keeps S invertible when outcomes * rank < dim
            g.push_back(a * a.adjoint() + 0.05 * ComplexMatrix::Identity(dim, dim));
            s += g.back();
        }
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(s);
        const ComplexMatrix inv_sqrt = es.eigenvectors() *
                                       es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                                       es.eigenvectors().adjoint();
        std::vector<ComplexMatrix> effects;
        for (auto &gk : g) {
            effects.push_back(inv_sqrt * gk * inv_sqrt);
        }
        return Povm::from_effects(std::move(effects));
    }

    /// Random orthonormal basis (columns), i.e. a random projective measurement.
    Povm projective(std::size_t dim) {
        Eigen::HouseholderQR<ComplexMatrix> qr(ginibre(dim, dim));
        const ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
        return Povm::projective(q);
    }

    std::mt19937_64 &engine() { return rng_; }

  private:
    std::mt19937_64 rng_;
};

inline double max_abs(const ComplexMatrix &m) { return m.cwiseAbs().maxCoeff(); }

} // namespace dephimetry::testing

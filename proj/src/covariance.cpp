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

#include "dephimetry/covariance.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "dephimetry/errors.hpp"

namespace dephimetry {

namespace {

constexpr double kSymmetryTolerance = 1e-12;
constexpr double kSingularRatio = 1e-12;

void check_family_args(std::size_t n, double two_beta2, double alpha, const char *what) {
    if (n == 0) {
        throw InvalidArgument(std::string(what) + ": n must be >= 1");
    }
    if (!(two_beta2 >= 0.0) || !std::isfinite(two_beta2)) {
        throw InvalidArgument(std::string(what) + ": two_beta2 must be finite and >= 0");
    }
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw InvalidArgument(std::string(what) + ": alpha must lie in [0, 1]");
    }
}

struct Inverted {
    double delta2;
    RealVector c_inv_ones;
};

Inverted invert_regular(const CovarianceMatrix &c) {
    const Eigen::LLT<RealMatrix> llt(c.matrix());
    if (llt.info() != Eigen::Success) {
        throw SingularCovariance("covariance factorization failed");
    }
    const auto n = static_cast<Eigen::Index>(c.size());
    RealVector x = llt.solve(RealVector::Ones(n));
    const double total = x.sum();
    if (!(total > 0.0)) {
        throw SingularCovariance("covariance inverse has non-positive total weight");
    }
    return {1.0 / total, std::move(x)};
}

} // namespace

CovarianceMatrix CovarianceMatrix::from_matrix(const RealMatrix &c) {
    if (c.rows() == 0 || c.rows() != c.cols()) {
        throw InvalidArgument("CovarianceMatrix: matrix must be square and non-empty");
    }
    if (!c.allFinite()) {
        throw InvalidArgument("CovarianceMatrix: entries must be finite");
    }
    if ((c - c.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance) {
        throw InvalidArgument("CovarianceMatrix: matrix is not symmetric");
    }
    RealMatrix sym = (c + c.transpose()) * 0.5;
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(sym, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw NumericalError("CovarianceMatrix: eigensolver failed");
    }
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (lo < -kPsdTolerance) {
        throw InvalidArgument("CovarianceMatrix: matrix is not positive semidefinite");
    }
    const double first = sym(0, 0);
    const double scale = std::max(1.0, sym.cwiseAbs().maxCoeff());
    const bool collective =
        first >= 0.0 && (sym.array() - first).abs().maxCoeff() <= kSymmetryTolerance * scale;
    return CovarianceMatrix(std::move(sym), lo, hi, collective);
}

CovarianceMatrix CovarianceMatrix::independent(std::size_t n, double two_beta2) {
    return build_c1(n, two_beta2, 0.0);
}

CovarianceMatrix CovarianceMatrix::collective(std::size_t n, double two_beta2) {
    return build_c1(n, two_beta2, 1.0);
}

bool CovarianceMatrix::is_singular() const {
    return max_eig_ <= 0.0 || min_eig_ < kSingularRatio * max_eig_;
}

RealMatrix CovarianceMatrix::square_root() const {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(c_);
    if (es.info() != Eigen::Success) {
        throw NumericalError("CovarianceMatrix: eigensolver failed");
    }
    const RealVector roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().transpose();
}

CovarianceMatrix build_c1(std::size_t n, double two_beta2, double alpha) {
    check_family_args(n, two_beta2, alpha, "build_c1");
    const auto k = static_cast<Eigen::Index>(n);
    RealMatrix c = RealMatrix::Constant(k, k, two_beta2 * alpha);
    c.diagonal().setConstant(two_beta2);
    return CovarianceMatrix::from_matrix(c);
}

CovarianceMatrix build_c2(std::size_t n, double two_beta2, double alpha) {
    check_family_args(n, two_beta2, alpha, "build_c2");
    const auto k = static_cast<Eigen::Index>(n);
    RealMatrix c(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) {
            c(i, j) = two_beta2 * std::pow(alpha, static_cast<double>(std::abs(i - j)));
        }
    }
    return CovarianceMatrix::from_matrix(c);
}

double delta2_c(const CovarianceMatrix &c) {
    if (c.is_singular()) {
        if (c.is_collective()) {
            return c.matrix()(0, 0);
        }
        throw SingularCovariance("covariance matrix is singular and not collective");
    }
    return invert_regular(c).delta2;
}

WeightVector weights(const CovarianceMatrix &c) {
    const auto n = static_cast<Eigen::Index>(c.size());
    if (c.is_singular()) {
        if (c.is_collective()) {
            return {RealVector::Constant(n, 1.0 / static_cast<double>(n))};
        }
        throw SingularCovariance("covariance matrix is singular and not collective");
    }
    auto inv = invert_regular(c);
    return {inv.c_inv_ones * inv.delta2};
}

double delta2_c1_closed(std::size_t n, double two_beta2, double alpha) {
    check_family_args(n, two_beta2, alpha, "delta2_c1_closed");
    return two_beta2 * (alpha + (1.0 - alpha) / static_cast<double>(n));
}

double delta2_c2_closed(std::size_t n, double two_beta2, double alpha) {
    check_family_args(n, two_beta2, alpha, "delta2_c2_closed");
    if (alpha >= 1.0) {
        throw InvalidArgument("delta2_c2_closed: alpha must be < 1");
    }
    // 1^T C^{-1} 1 for the tridiagonal AR(1) inverse:
    // (N (1 - alpha) + 2 alpha) / (2 beta^2 (1 + alpha)).
    const double nn = static_cast<double>(n);
    return two_beta2 * (1.0 + alpha) / (nn * (1.0 - alpha) + 2.0 * alpha);
}

} // namespace dephimetry

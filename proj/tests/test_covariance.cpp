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

#include <cmath>

#include <doctest.h>

#include "dephimetry/covariance.hpp"
#include "dephimetry/errors.hpp"
#include "support/random.hpp"

using namespace dephimetry;
using dephimetry::testing::Sampler;

namespace {

// Independent oracle: explicit inverse via full-pivot LU.
double inverse_sum(const RealMatrix &c) {
    return 1.0 / c.fullPivLu().inverse().sum();
}

} // namespace

TEST_CASE("build_c1 examples") {
    const auto id = build_c1(2, 1.0, 0.0);
    CHECK((id.matrix() - RealMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);

    const auto c = build_c1(3, 0.5, 0.2);
    for (Eigen::Index i = 0; i < 3; ++i) {
        for (Eigen::Index j = 0; j < 3; ++j) {
            CHECK(c.matrix()(i, j) == doctest::Approx(i == j ? 0.5 : 0.1));
        }
    }

    const auto coll = build_c1(2, 1.0, 1.0);
    CHECK(coll.is_singular());
    CHECK(coll.is_collective());

    CHECK_THROWS_AS(build_c1(2, 1.0, -0.1), InvalidArgument);
    CHECK_THROWS_AS(build_c1(2, 1.0, 1.1), InvalidArgument);
    CHECK_THROWS_AS(build_c1(2, -1.0, 0.5), InvalidArgument);
    CHECK_THROWS_AS(build_c1(0, 1.0, 0.5), InvalidArgument);
}

TEST_CASE("build_c2 examples") {
    const auto c = build_c2(2, 1.0, 0.5);
    CHECK(c.matrix()(0, 1) == doctest::Approx(0.5));
    CHECK(c.matrix()(1, 1) == doctest::Approx(1.0));
    const auto diag = build_c2(4, 0.7, 0.0);
    CHECK((diag.matrix() - 0.7 * RealMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
    const auto c4 = build_c2(4, 0.5, 0.9);
    CHECK(c4.matrix()(0, 3) == doctest::Approx(0.5 * 0.729).epsilon(1e-14));
    CHECK_FALSE(c4.is_singular());
    CHECK_THROWS_AS(build_c2(3, 1.0, 2.0), InvalidArgument);
}

TEST_CASE("covariance validation") {
    RealMatrix asym(2, 2);
    asym << 1.0, 0.5, 0.4, 1.0;
    CHECK_THROWS_AS(CovarianceMatrix::from_matrix(asym), InvalidArgument);
    RealMatrix neg(2, 2);
    neg << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(CovarianceMatrix::from_matrix(neg), InvalidArgument);
}

TEST_CASE("delta2_c examples") {
    CHECK(delta2_c(CovarianceMatrix::independent(5, 0.5)) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(delta2_c(build_c1(2, 1.0, 0.5)) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(delta2_c(build_c1(4, 0.6, 1.0)) == doctest::Approx(0.6));
    CHECK(delta2_c(CovarianceMatrix::collective(3, 0.0)) == 0.0);

    RealMatrix singular = RealMatrix::Zero(3, 3);
    singular(0, 0) = 1.0;
    singular(1, 1) = 1.0;
    CHECK_THROWS_AS(delta2_c(CovarianceMatrix::from_matrix(singular)), SingularCovariance);
    CHECK_THROWS_AS(weights(CovarianceMatrix::from_matrix(singular)), SingularCovariance);
}

TEST_CASE("weights examples") {
    for (double c : {0.1, 1.0, 7.0}) {
        const auto g = weights(CovarianceMatrix::independent(4, c)).gamma;
        CHECK((g.array() - 0.25).abs().maxCoeff() < 1e-14);
    }
    for (double alpha : {0.0, 0.3, 0.9, 1.0}) {
        const auto g = weights(build_c1(5, 0.5, alpha)).gamma;
        CHECK((g.array() - 0.2).abs().maxCoeff() < 1e-12);
    }
    const auto g = weights(build_c2(3, 1.0, 0.5)).gamma;
    CHECK(g.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g(0) == doctest::Approx(g(2)));
    CHECK(std::abs(g(1) - g(0)) > 1e-3);
    // Oracle: gamma proportional to C^{-1} 1.
    const RealVector raw = build_c2(3, 1.0, 0.5).matrix().fullPivLu().inverse().rowwise().sum();
    CHECK(((raw / raw.sum()) - g).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("closed forms agree with inversion") {
    for (std::size_t n = 2; n <= 12; ++n) {
        for (double alpha : {0.0, 0.2, 0.5, 0.9, 0.99}) {
            const double c1 = inverse_sum(build_c1(n, 0.5, alpha).matrix());
            const double c2 = inverse_sum(build_c2(n, 0.5, alpha).matrix());
            CHECK(std::abs(delta2_c1_closed(n, 0.5, alpha) - c1) <= 1e-10 * (1 + std::abs(c1)));
            CHECK(std::abs(delta2_c2_closed(n, 0.5, alpha) - c2) <= 1e-10 * (1 + std::abs(c2)));
            CHECK(std::abs(delta2_c(build_c1(n, 0.5, alpha)) - c1) <= 1e-10 * (1 + c1));
            CHECK(std::abs(delta2_c(build_c2(n, 0.5, alpha)) - c2) <= 1e-10 * (1 + c2));
        }
    }
}

TEST_CASE("closed form examples") {
    CHECK(delta2_c1_closed(7, 0.5, 0.0) == doctest::Approx(0.5 / 7));
    CHECK(delta2_c1_closed(7, 0.5, 1.0) == doctest::Approx(0.5));
    CHECK(delta2_c1_closed(2, 1.0, 0.5) == doctest::Approx(0.75));
    CHECK(delta2_c2_closed(7, 0.5, 0.0) == doctest::Approx(0.5 / 7));
    CHECK(1e6 * delta2_c2_closed(1000000, 1.0, 0.5) == doctest::Approx(3.0).epsilon(1e-5));
    // 2x2 oracle: [[1, a], [a, 1]]^{-1} sums to 2 / (1 + a).
    CHECK(delta2_c2_closed(2, 1.0, 0.5) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK_THROWS_AS(delta2_c2_closed(3, 1.0, 1.0), InvalidArgument);
}

TEST_CASE("c1 closed form is monotone in alpha") {
    double prev = 0.0;
    for (int i = 0; i <= 100; ++i) {
        const double v = delta2_c1_closed(9, 0.5, i / 100.0);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("weights minimize the weighted variance") {
    Sampler s(5);
    for (int trial = 0; trial < 10; ++trial) {
        const auto c = s.covariance(4);
        const RealVector g = weights(c).gamma;
        const double best = g.dot(c.matrix() * g);
        CHECK(std::abs(best - delta2_c(c)) < 1e-10);
        CHECK(g.sum() == doctest::Approx(1.0).epsilon(1e-10));
        for (int k = 0; k < 100; ++k) {
            RealVector eps(4);
            for (Eigen::Index j = 0; j < 4; ++j) {
                eps(j) = s.uniform(-0.1, 0.1);
            }
            eps.array() -= eps.mean();
            const RealVector other = g + eps;
            CHECK(other.dot(c.matrix() * other) >= best - 1e-12);
        }
    }
}

TEST_CASE("square root reproduces the covariance") {
    Sampler s(8);
    const auto c = s.covariance(5);
    const RealMatrix r = c.square_root();
    CHECK((r * r.transpose() - c.matrix()).cwiseAbs().maxCoeff() < 1e-12);
    const RealMatrix rc = build_c1(3, 0.5, 1.0).square_root();
    CHECK((rc * rc.transpose() - build_c1(3, 0.5, 1.0).matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

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
#include "dephimetry/dephasing.hpp"
#include "dephimetry/errors.hpp"
#include "dephimetry/fisher.hpp"
#include "support/random.hpp"

using namespace dephimetry;
using dephimetry::testing::max_abs;
using dephimetry::testing::Sampler;

TEST_CASE("single qubit off-diagonal decay") {
    const auto gen = GeneratorSpec::qubits(1);
    const auto plus = product_plus_state(1);
    for (double beta2 : {0.1, 0.25, 1.0}) {
        const auto out = dephase(plus, gen, CovarianceMatrix::independent(1, 2 * beta2));
        CHECK(out.matrix()(0, 1).real() == doctest::Approx(0.5 * std::exp(-beta2)).epsilon(1e-14));
        CHECK(out.matrix()(0, 0).real() == 0.5);
    }
}

TEST_CASE("zero covariance is the identity channel") {
    Sampler s(2);
    const auto gen = GeneratorSpec::qubits(2);
    const auto rho = s.mixed_state(4);
    const auto out = dephase(rho, gen, CovarianceMatrix::independent(2, 0.0));
    CHECK(max_abs(out.matrix() - rho.matrix()) == 0.0);
}

TEST_CASE("ghz extreme coherence") {
    const auto gen = GeneratorSpec::qubits(2);
    const auto out = dephase(ghz_state(2), gen, CovarianceMatrix::independent(2, 0.5));
    CHECK(out.matrix()(0, 3).real() == doctest::Approx(0.5 * std::exp(-0.5)).epsilon(1e-14));
}

TEST_CASE("channel preserves trace, hermiticity and positivity") {
    Sampler s(17);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = s.index(1, 4);
        const auto gen = GeneratorSpec::qubits(n);
        const auto rho = s.mixed_state(gen.dim(), s.index(1, gen.dim()));
        const auto c = s.covariance(n, s.uniform(0.01, 2.0));
        const auto out = dephase(rho, gen, c);
        CHECK(std::abs(out.matrix().trace().real() - 1.0) < 1e-12);
        CHECK(max_abs(out.matrix() - out.matrix().adjoint()) < 1e-14);
        CHECK(out.eigenvalues().minCoeff() > -1e-10);
        // Diagonal untouched
        CHECK((out.matrix().diagonal() - rho.matrix().diagonal()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("dephasing commutes with phase encoding and composes") {
    Sampler s(23);
    const auto gen = GeneratorSpec::qubits(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto rho = s.mixed_state(8);
        const auto c1 = s.covariance(3);
        const auto c2 = s.covariance(3);
        const double phi = s.uniform(-2, 2);
        const auto a = dephase(encode_phase(rho, gen, phi), gen, c1);
        const auto b = encode_phase(dephase(rho, gen, c1), gen, phi);
        CHECK(max_abs(a.matrix() - b.matrix()) < 1e-14);
        const auto twice = dephase(dephase(rho, gen, c1), gen, c2);
        const auto sum = dephase(rho, gen, CovarianceMatrix::from_matrix(c1.matrix() + c2.matrix()));
        CHECK(max_abs(twice.matrix() - sum.matrix()) < 1e-12);
    }
}

TEST_CASE("dephasing errors") {
    const auto gen = GeneratorSpec::qubits(2);
    CHECK_THROWS_AS(dephase(ghz_state(3), gen, CovarianceMatrix::independent(2, 0.5)),
                    InvalidArgument);
    CHECK_THROWS_AS(dephase(ghz_state(2), gen, CovarianceMatrix::independent(3, 0.5)),
                    InvalidArgument);
}

TEST_CASE("monte carlo dephasing") {
    SUBCASE("zero covariance leaves the state unchanged") {
        const auto gen = GeneratorSpec::qubits(2);
        const auto rho = ghz_state(2);
        const auto mc = dephase_monte_carlo(rho, gen, CovarianceMatrix::independent(2, 0.0), 1, 9);
        CHECK(max_abs(mc.state.matrix() - rho.matrix()) < 1e-15);
    }
    SUBCASE("single qubit converges to the analytic decay") {
        const auto gen = GeneratorSpec::qubits(1);
        const auto mc = dephase_monte_carlo(product_plus_state(1), gen,
                                            CovarianceMatrix::independent(1, 0.5), 1000000, 42);
        const double expected = 0.5 * std::exp(-0.25);
        CHECK(std::abs(mc.state.matrix()(0, 1).real() - expected) <= 3 * mc.std_error(0, 1));
        CHECK(mc.shots == 1000000);
    }
    SUBCASE("correlated three-qubit case matches entrywise") {
        const auto gen = GeneratorSpec::qubits(3);
        const auto rho = ghz_state(3);
        const auto c = build_c1(3, 0.5, 0.5);
        const auto exact = dephase(rho, gen, c);
        const auto mc = dephase_monte_carlo(rho, gen, c, 200000, 7);
        const ComplexMatrix diff = mc.state.matrix() - exact.matrix();
        for (Eigen::Index i = 0; i < diff.rows(); ++i) {
            for (Eigen::Index j = 0; j < diff.cols(); ++j) {
                CHECK(std::abs(diff(i, j)) <= 3 * mc.std_error(i, j) + 1e-14);
            }
        }
    }
    SUBCASE("result does not depend on seed partitioning by thread count") {
        const auto gen = GeneratorSpec::qubits(1);
        const auto a = dephase_monte_carlo(product_plus_state(1), gen,
                                           CovarianceMatrix::independent(1, 0.5), 20000, 5);
        const auto b = dephase_monte_carlo(product_plus_state(1), gen,
                                           CovarianceMatrix::independent(1, 0.5), 20000, 5);
        CHECK(max_abs(a.state.matrix() - b.state.matrix()) == 0.0);
    }
    CHECK_THROWS_AS(dephase_monte_carlo(product_plus_state(1), GeneratorSpec::qubits(1),
                                        CovarianceMatrix::independent(1, 0.5), 0, 1),
                    InvalidArgument);
}

TEST_CASE("derivative_state examples") {
    const auto gen = GeneratorSpec::qubits(1);
    ComplexMatrix diag = ComplexMatrix::Zero(2, 2);
    diag(0, 0) = 0.3;
    diag(1, 1) = 0.7;
    CHECK(max_abs(derivative_state(DensityMatrix::from_matrix(diag), gen).matrix()) == 0.0);

    const double c = 0.6;
    ComplexMatrix rho(2, 2);
    rho << 0.5, 0.5 * c, 0.5 * c, 0.5;
    const auto d = derivative_state(DensityMatrix::from_matrix(rho), gen).matrix();
    // -i[sz/2, (I + c sx)/2] = c sy / 2
    ComplexMatrix sy(2, 2);
    sy << 0.0, Complex(0, -1), Complex(0, 1), 0.0;
    CHECK(max_abs(d - 0.5 * c * sy) < 1e-15);

    Sampler s(4);
    const auto g3 = GeneratorSpec::qubits(3);
    const auto op = derivative_state(s.mixed_state(8), g3);
    CHECK(std::abs(op.matrix().trace()) < 1e-14);

    ComplexMatrix total = ComplexMatrix::Zero(8, 8);
    const auto r = s.mixed_state(8);
    for (std::size_t j = 0; j < 3; ++j) {
        total += site_derivative_state(r, g3, j).matrix();
    }
    CHECK(max_abs(total - derivative_state(r, g3).matrix()) < 1e-14);
}

TEST_CASE("conditional covariance") {
    const auto coll = conditional_covariance(build_c1(3, 0.5, 1.0));
    CHECK(coll.matrix().cwiseAbs().maxCoeff() < 1e-15);

    const auto ind = conditional_covariance(CovarianceMatrix::independent(2, 0.8));
    RealMatrix expected(2, 2);
    expected << 0.4, -0.4, -0.4, 0.4;
    CHECK((ind.matrix() - expected).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(ind.min_eigenvalue() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ind.max_eigenvalue() == doctest::Approx(0.8));
}

TEST_CASE("conditional state: collective limit is a pure rotation") {
    const auto gen = GeneratorSpec::qubits(2);
    const auto rho = ghz_state(2);
    const auto out = conditional_dephased_state(rho, gen, build_c1(2, 0.5, 1.0), 0.3, 0.0);
    CHECK(max_abs(out.matrix() - encode_phase(rho, gen, 0.3).matrix()) < 1e-15);
}

TEST_CASE("conditional state follows the unitary derivative") {
    Sampler s(31);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = s.index(1, 3);
        const auto gen = GeneratorSpec::qubits(n);
        const auto rho = s.mixed_state(gen.dim());
        const auto c = s.covariance(n, 0.5);
        const double phi = s.uniform(-1, 1);
        const double h = 1e-5;
        const ComplexMatrix fd = (conditional_dephased_state(rho, gen, c, phi + h, 0.0).matrix() -
                                  conditional_dephased_state(rho, gen, c, phi - h, 0.0).matrix()) /
                                 (2 * h);
        const auto at = conditional_dephased_state(rho, gen, c, phi, 0.0);
        CHECK(max_abs(fd - derivative_state(at, gen).matrix()) <= 1e-6);
        CHECK(qfi(at, gen) <= qfi(rho, gen) + 1e-8);
    }
}

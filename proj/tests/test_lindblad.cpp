// Copyright 2026 The oqsim Authors
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
#include <random>

#include <gtest/gtest.h>

#include "oqsim/lindblad.hpp"
#include "oracles.hpp"

namespace oqsim {
namespace {

DensityMatrix plus_state() {
    Matrix m = Matrix::Constant(2, 2, 0.5);
    return DensityMatrix::validated(m);
}

TEST(LindbladRhs, SingleQubitDephasingOfPlusState) {
    // H = 0, L = Z: d rho / dt = gamma (Z rho Z - rho) = -2 gamma (off-diagonals).
    const OperatorMatrix h = OperatorMatrix::hermitian(Matrix::Zero(2, 2));
    const DissipatorSet diss = build_uniform_dephasing(1, 0.1);
    const Matrix r = lindblad_rhs(plus_state(), h, diss);
    EXPECT_NEAR(r(0, 0).real(), 0.0, 1e-16);
    EXPECT_NEAR(r(1, 1).real(), 0.0, 1e-16);
    EXPECT_NEAR(r(0, 1).real(), -0.1, 1e-16);
    EXPECT_NEAR(r(1, 0).real(), -0.1, 1e-16);
}

TEST(LindbladRhs, MatchesGenericOracleAndIsTraceless) {
    std::mt19937_64 rng(17);
    const int n = 3;
    const OperatorMatrix h = build_xy(Geometry::chain(n), -1.0);
    const DissipatorSet diss = build_uniform_dephasing(n, 0.3);
    const oracle::Lindblad ref = oracle::dephased(oracle::xy_chain(n, -1.0), n, 0.3);
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix rho = oracle::random_density(n, rng);
        const Matrix got = lindblad_rhs(rho, h, diss);
        EXPECT_LT(max_abs(got - ref.rhs(rho)), 1e-13);
        EXPECT_LT(std::abs(got.trace()), 1e-13);
        EXPECT_LT(hermiticity_defect(got), 1e-13);
    }
}

TEST(Reference, DephasingCoherenceDecaysExponentially) {
    // <X>(t) = exp(-2 gamma t); at gamma = 0.1, t = 5 this is exp(-1).
    EvolutionParams p;
    p.dt = 0.05;
    p.total_time = 5.0;
    p.substeps = 10;
    const ReferenceRun run = integrate_reference(plus_state(), OperatorMatrix::hermitian(Matrix::Zero(2, 2)),
                                                 build_uniform_dephasing(1, 0.1), p);
    ASSERT_EQ(run.states.size(), 101u);
    EXPECT_NEAR(expectation(run.states.back(), PauliString("X")), std::exp(-1.0), 1e-12);
    for (std::size_t s = 0; s < run.states.size(); ++s) {
        EXPECT_NEAR(expectation(run.states[s], PauliString("X")), std::exp(-0.2 * 0.05 * s), 1e-12);
    }
}

TEST(Reference, MatchesIndependentRk4) {
    const int n = 3;
    std::mt19937_64 rng(4);
    const Matrix rho0 = oracle::random_density(n, rng, 1);
    EvolutionParams p;
    p.dt = 0.05;
    p.total_time = 1.0;
    p.substeps = 10;
    const ReferenceRun run = integrate_reference(DensityMatrix::validated(rho0), build_xy(Geometry::chain(n), -1.0),
                                                 build_uniform_dephasing(n, 0.1), p);
    const auto ref = oracle::dephased(oracle::xy_chain(n, -1.0), n, 0.1).evolve(rho0, 0.05, 20, 10);
    for (std::size_t s = 0; s < ref.size(); ++s) {
        EXPECT_LT(max_abs(run.states[s].matrix() - ref[s]), 1e-12) << "step " << s;
    }
    EXPECT_LT(run.max_trace_drift, 1e-12);
}

TEST(Reference, UnitaryLimitPreservesPurityAndMagnetization) {
    const int n = 4;
    const DensityMatrix rho0 = DensityMatrix::pure(StateVector::basis("0110"));
    EvolutionParams p;
    p.dt = 0.05;
    p.total_time = 5.0;
    p.substeps = 10;
    const OperatorMatrix mz = total_magnetization(n);
    const ReferenceRun run = integrate_reference(rho0, build_xy(Geometry::chain(n), -1.0), DissipatorSet(n, {}), p);
    for (const auto& s : run.states) {
        EXPECT_NEAR(s.purity(), 1.0, 1e-8);
        EXPECT_NEAR(expectation(s, mz), 0.0, 1e-7);
    }
}

TEST(Reference, DissipationConservesMagnetization) {
    const int n = 4;
    std::vector<double> angles = {0.3, 1.2, 2.0, 0.1};
    const DensityMatrix rho0 = DensityMatrix::pure(StateVector::product(angles));
    EvolutionParams p;
    p.dt = 0.05;
    p.total_time = 3.0;
    p.substeps = 10;
    const OperatorMatrix mz = total_magnetization(n);
    const double m0 = expectation(rho0, mz);
    const ReferenceRun xy =
        integrate_reference(rho0, build_xy(Geometry::chain(n), -1.0), build_uniform_dephasing(n, 0.1), p);
    for (const auto& s : xy.states) {
        EXPECT_NEAR(expectation(s, mz), m0, 1e-7);
    }
    const auto [h, disorder] = build_heisenberg_disordered(n, -1.0, 10.0, 1);
    const ReferenceRun heis = integrate_reference(rho0, h, build_uniform_dephasing(n, 0.1), p);
    for (const auto& s : heis.states) {
        EXPECT_NEAR(expectation(s, mz), m0, 1e-8);
    }
}

TEST(EvolutionParams, ValidatesStepCount) {
    EvolutionParams p;
    p.dt = 0.05;
    p.total_time = 5.0;
    EXPECT_EQ(p.steps(), 100);
    p.dt = 0.0;
    EXPECT_THROW(p.steps(), ConfigError);
    p.dt = 0.03;
    EXPECT_THROW(p.steps(), ConfigError);
    p.dt = 0.1;
    p.total_time = 0.05;
    EXPECT_THROW(p.steps(), ConfigError);
}

TEST(EulerKraus, CompletenessDefectIsSecondOrder) {
    // sum M^dagger M - I = dt^2 (H^2 + Gamma^2 / 4) for Pauli jumps.
    const int n = 3;
    const OperatorMatrix h = build_xy(Geometry::chain(n), -1.0);
    const DissipatorSet diss = build_uniform_dephasing(n, 0.1);
    for (double dt : {0.1, 0.05, 0.025}) {
        const Matrix h2 = h.matrix() * h.matrix();
        const Matrix expect = dt * dt * (h2 + 0.25 * 0.3 * 0.3 * Matrix::Identity(8, 8));
        EXPECT_NEAR(kraus_completeness_defect(h, diss, dt), expect.cwiseAbs().maxCoeff(), 1e-14);
    }
}

TEST(EulerKraus, CompletenessDefectWithoutHamiltonian) {
    // H = 0 leaves only the (Gamma dt / 2)^2 term, below (Gamma dt)^2.
    const OperatorMatrix zero = OperatorMatrix::hermitian(Matrix::Zero(4, 4));
    const double defect = kraus_completeness_defect(zero, build_uniform_dephasing(2, 0.1), 0.05);
    EXPECT_NEAR(defect, 0.25 * 0.01 * 0.01, 1e-15);
    EXPECT_LE(defect, 0.01 * 0.01);
}

TEST(EulerKraus, SmallStepsMoveTheStateLittle) {
    std::mt19937_64 rng(22);
    const DensityMatrix rho = DensityMatrix::validated(oracle::random_density(3, rng));
    const OperatorMatrix h = build_xy(Geometry::chain(3), -1.0);
    const DissipatorSet diss = build_uniform_dephasing(3, 0.1);
    for (double dt : {1e-2, 1e-3, 1e-4}) {
        EXPECT_LT(max_abs(euler_kraus_step(rho, h, diss, dt).state.matrix() - rho.matrix()), 10.0 * dt);
    }
}

TEST(EulerKraus, OneStepDifferenceToRk4IsSecondOrder) {
    std::mt19937_64 rng(23);
    const int n = 3;
    const OperatorMatrix h = build_xy(Geometry::chain(n), -1.0);
    const DissipatorSet diss = build_uniform_dephasing(n, 0.1);
    for (int trial = 0; trial < 3; ++trial) {
        const Matrix r = oracle::random_density(n, rng);
        const DensityMatrix rho = DensityMatrix::validated(r);
        const oracle::Lindblad ref = oracle::dephased(oracle::xy_chain(n, -1.0), n, 0.1);
        auto diff = [&](double dt) {
            return max_abs(euler_kraus_step(rho, h, diss, dt).state.matrix() - ref.rk4_step(r, dt));
        };
        EXPECT_NEAR(diff(0.02) / diff(0.01), 4.0, 0.4);
    }
}

TEST(EulerKraus, StepMatchesKrausSum) {
    const int n = 2;
    std::mt19937_64 rng(6);
    const Matrix rho = oracle::random_density(n, rng);
    const OperatorMatrix h = build_xy(Geometry::chain(n), -1.0);
    const DissipatorSet diss = build_uniform_dephasing(n, 0.2);
    const double dt = 0.05;
    const Matrix id = Matrix::Identity(4, 4);
    const Matrix m0 = id + (Complex(0, -1) * h.matrix() - 0.5 * 0.4 * id) * dt;
    Matrix expect = m0 * rho * m0.adjoint();
    for (int i = 0; i < n; ++i) {
        const Matrix z = oracle::kron_pauli(oracle::single(n, i, 'Z'));
        expect += 0.2 * dt * z * rho * z;
    }
    const KrausStep step = euler_kraus_step(DensityMatrix::validated(rho), h, diss, dt);
    EXPECT_NEAR(step.trace_defect, expect.trace().real() - 1.0, 1e-15);
    EXPECT_LT(max_abs(step.state.matrix() - expect / expect.trace().real()), 1e-15);
}

TEST(Reference, EulerKrausIsFirstOrder) {
    const int n = 2;
    const DensityMatrix rho0 = DensityMatrix::pure(StateVector::basis("01"));
    const OperatorMatrix h = build_xy(Geometry::chain(n), -1.0);
    const DissipatorSet diss = build_uniform_dephasing(n, 0.1);
    EvolutionParams exact;
    exact.dt = 0.1;
    exact.total_time = 1.0;
    exact.substeps = 20;
    const auto truth = integrate_reference(rho0, h, diss, exact).states.back();
    double prev = 0.0;
    for (int sub : {10, 20, 40}) {
        EvolutionParams p = exact;
        p.method = EvolutionParams::Method::euler_kraus;
        p.substeps = sub;
        const double err = max_abs(integrate_reference(rho0, h, diss, p).states.back().matrix() - truth.matrix());
        if (prev > 0.0) {
            EXPECT_NEAR(prev / err, 2.0, 0.2);
        }
        prev = err;
    }
}

}  // namespace
}  // namespace oqsim

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

#include <set>

#include <gtest/gtest.h>

#include "oqsim/models.hpp"
#include "oracles.hpp"

namespace oqsim {
namespace {

TEST(Geometry, ChainAndGridEdges) {
    const auto chain = Geometry::chain(4).edges();
    ASSERT_EQ(chain.size(), 3u);
    EXPECT_EQ(chain[2], std::make_pair(2, 3));

    // 3x3 open lattice: 6 horizontal and 6 vertical bonds.
    const auto grid = Geometry::grid(3, 3).edges();
    EXPECT_EQ(grid.size(), 12u);
    std::set<std::pair<int, int>> unique(grid.begin(), grid.end());
    EXPECT_EQ(unique.size(), grid.size());
    EXPECT_TRUE(unique.count({0, 1}) && unique.count({0, 3}) && unique.count({4, 7}));
    EXPECT_FALSE(unique.count({2, 3}));  // no wrap-around between rows
    EXPECT_EQ(Geometry::grid(2, 2).edges().size(), 4u);
    EXPECT_THROW(Geometry::chain(0), DimensionError);
}

TEST(XYModel, MatchesKroneckerOracle) {
    const OperatorMatrix h = build_xy(Geometry::chain(4), -1.0);
    EXPECT_TRUE(h.is_hermitian());
    EXPECT_LT(max_abs(h.matrix() - oracle::xy_chain(4, -1.0)), 1e-15);
}

TEST(XYModel, TwoSiteHoppingOnBasisState) {
    // -J(XX + YY)|01> = -2J|10>; with J = -1 this is 2|10>.
    const OperatorMatrix h = build_xy(Geometry::chain(2), -1.0);
    Vector v = Vector::Zero(4);
    v[0b01] = 1.0;
    const Vector hv = h.matrix() * v;
    EXPECT_NEAR(hv[0b10].real(), 2.0, 1e-15);
    EXPECT_NEAR(hv.norm(), 2.0, 1e-15);
}

TEST(XYModel, GridMatchesSumOverBonds) {
    const OperatorMatrix h = build_xy(Geometry::grid(2, 3), 0.7);
    oracle::M expect = oracle::M::Zero(64, 64);
    const std::vector<std::pair<int, int>> bonds = {{0, 1}, {1, 2}, {3, 4}, {4, 5}, {0, 3}, {1, 4}, {2, 5}};
    for (auto [i, j] : bonds) {
        expect -= 0.7 * (oracle::kron_pauli(oracle::pair(6, i, j, 'X')) + oracle::kron_pauli(oracle::pair(6, i, j, 'Y')));
    }
    EXPECT_LT(max_abs(h.matrix() - expect), 1e-14);
}

TEST(Models, ConserveTotalMagnetization) {
    const Matrix mz = total_magnetization(5).matrix();
    const Matrix xy = build_xy(Geometry::chain(5), -1.0).matrix();
    EXPECT_LT(max_abs(xy * mz - mz * xy), 1e-13);
    const auto [heis, disorder] = build_heisenberg_disordered(5, -1.0, 10.0, 3);
    EXPECT_LT(max_abs(heis.matrix() * mz - mz * heis.matrix()), 1e-12);
}

TEST(Heisenberg, MatchesOracleWithDrawnFields) {
    const auto [h, disorder] = build_heisenberg_disordered(4, -1.0, 10.0, 42);
    ASSERT_EQ(disorder.fields.size(), 4u);
    oracle::M expect = oracle::M::Zero(16, 16);
    for (int i = 0; i < 3; ++i) {
        for (char c : {'X', 'Y', 'Z'}) {
            expect += oracle::kron_pauli(oracle::pair(4, i, i + 1, c));
        }
    }
    for (int i = 0; i < 4; ++i) {
        expect += disorder.fields[static_cast<std::size_t>(i)] * oracle::kron_pauli(oracle::single(4, i, 'Z'));
    }
    EXPECT_LT(max_abs(h.matrix() - expect), 1e-13);
}

TEST(Disorder, FieldsInRangeAndSeeded) {
    const auto a = draw_disorder(50, 10.0, 7);
    const auto b = draw_disorder(50, 10.0, 7);
    const auto c = draw_disorder(50, 10.0, 8);
    EXPECT_EQ(a.fields, b.fields);
    EXPECT_NE(a.fields, c.fields);
    for (double v : a.fields) {
        EXPECT_GE(v, -10.0);
        EXPECT_LE(v, 10.0);
    }
    EXPECT_THROW(draw_disorder(3, -1.0, 1), DimensionError);
}

TEST(Dephasing, TotalRateAndValidation) {
    const DissipatorSet d = build_uniform_dephasing(10, 0.1);
    EXPECT_EQ(d.size(), 10u);
    EXPECT_NEAR(d.total_rate(), 1.0, 1e-15);
    EXPECT_EQ(d.terms()[3].string.str(), "IIIZIIIIII");
    EXPECT_NEAR(build_uniform_dephasing(4, 0.1).total_rate(), 0.4, 1e-15);
    EXPECT_THROW(build_uniform_dephasing(4, -0.1), DimensionError);
    EXPECT_THROW(DissipatorSet(3, {{PauliString("ZZ"), 0.1}}), DimensionError);
}

}  // namespace
}  // namespace oqsim

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

#include "oqsim/models.hpp"

#include <cmath>
#include <string>

#include "oqsim/rng.hpp"

namespace oqsim {

Geometry Geometry::chain(int n) {
    if (n < 1) {
        throw DimensionError("chain needs at least one site, got " + std::to_string(n));
    }
    return Geometry(Kind::chain, 1, n);
}

Geometry Geometry::grid(int rows, int cols) {
    if (rows < 1 || cols < 1) {
        throw DimensionError("grid extents must be positive");
    }
    return Geometry(Kind::grid, rows, cols);
}

std::vector<std::pair<int, int>> Geometry::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int r = 0; r < rows_; ++r) {
        for (int c = 0; c < cols_; ++c) {
            const int site = r * cols_ + c;
            if (c + 1 < cols_) {
                out.emplace_back(site, site + 1);
            }
            if (r + 1 < rows_) {
                out.emplace_back(site, site + cols_);
            }
        }
    }
    return out;
}

DissipatorSet::DissipatorSet(int n, std::vector<Dissipator> terms) : n_(n), terms_(std::move(terms)) {
    CompensatedSum total;
    for (const auto& t : terms_) {
        if (t.string.size() != n_) {
            throw DimensionError("dissipator " + t.string.str() + " does not act on " + std::to_string(n_) +
                                 " qubits");
        }
        if (!(t.rate >= 0.0) || !std::isfinite(t.rate)) {
            throw DimensionError("dissipation rate must be finite and non-negative, got " + std::to_string(t.rate));
        }
        total.add(t.rate);
    }
    total_rate_ = total.value();
}

DisorderRealization draw_disorder(int n, double h, std::uint64_t seed) {
    if (h < 0.0) {
        throw DimensionError("disorder strength must be non-negative");
    }
    DisorderRealization dis;
    dis.strength = h;
    dis.seed = seed;
    std::mt19937_64 eng(seed);
    dis.fields.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        dis.fields.push_back(h * (2.0 * uniform01(eng) - 1.0));
    }
    return dis;
}

namespace {

Matrix zero_operator(int n, const NumericPolicy& policy) {
    if (n > policy.max_qubits) {
        throw DimensionError(std::to_string(n) + " qubits exceeds the limit of " + std::to_string(policy.max_qubits));
    }
    const auto dim = static_cast<Eigen::Index>(dim_for_qubits(n));
    return Matrix::Zero(dim, dim);
}

void add_pair(Matrix& h, int n, int i, int j, Pauli p, double coeff) {
    std::vector<Pauli> letters(static_cast<std::size_t>(n), Pauli::I);
    letters[static_cast<std::size_t>(i)] = p;
    letters[static_cast<std::size_t>(j)] = p;
    add_pauli_term(h, coeff, PauliString(std::move(letters)));
}

}  // namespace

OperatorMatrix build_xy(const Geometry& geometry, double coupling, const NumericPolicy& policy) {
    const int n = geometry.sites();
    Matrix h = zero_operator(n, policy);
    for (const auto& [i, j] : geometry.edges()) {
        add_pair(h, n, i, j, Pauli::X, -coupling);
        add_pair(h, n, i, j, Pauli::Y, -coupling);
    }
    return OperatorMatrix::hermitian(std::move(h), policy);
}

std::pair<OperatorMatrix, DisorderRealization> build_heisenberg_disordered(int n, double coupling, double h,
                                                                           std::uint64_t seed,
                                                                           const NumericPolicy& policy) {
    if (n < 2) {
        throw DimensionError("Heisenberg chain needs n >= 2");
    }
    DisorderRealization dis = draw_disorder(n, h, seed);
    Matrix hm = zero_operator(n, policy);
    for (int i = 0; i + 1 < n; ++i) {
        for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
            add_pair(hm, n, i, i + 1, p, -coupling);
        }
    }
    for (int i = 0; i < n; ++i) {
        add_pauli_term(hm, dis.fields[static_cast<std::size_t>(i)], PauliString::single(n, i, Pauli::Z));
    }
    return {OperatorMatrix::hermitian(std::move(hm), policy), std::move(dis)};
}

DissipatorSet build_uniform_dephasing(int n, double gamma) {
    if (gamma < 0.0) {
        throw DimensionError("dephasing rate must be non-negative, got " + std::to_string(gamma));
    }
    std::vector<Dissipator> terms;
    terms.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        terms.push_back({PauliString::single(n, k, Pauli::Z), gamma});
    }
    return DissipatorSet(n, std::move(terms));
}

OperatorMatrix total_magnetization(int n) {
    Matrix m = zero_operator(n, default_policy());
    for (int i = 0; i < n; ++i) {
        add_pauli_term(m, 1.0, PauliString::single(n, i, Pauli::Z));
    }
    return OperatorMatrix::hermitian(std::move(m));
}

}  // namespace oqsim

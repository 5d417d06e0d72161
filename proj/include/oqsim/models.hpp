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

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "oqsim/operators.hpp"
#include "oqsim/pauli.hpp"

namespace oqsim {

/// Open-boundary lattice. Grid sites are indexed row-major.
class Geometry {
  public:
    enum class Kind { chain, grid };

    static Geometry chain(int n);
    static Geometry grid(int rows, int cols);

    Kind kind() const noexcept { return kind_; }
    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    int sites() const noexcept { return rows_ * cols_; }

    /// Nearest-neighbour pairs (i < j), no duplicates.
    std::vector<std::pair<int, int>> edges() const;

  private:
    Geometry(Kind kind, int rows, int cols) : kind_(kind), rows_(rows), cols_(cols) {}

    Kind kind_;
    int rows_;
    int cols_;
};

struct Dissipator {
    PauliString string;
    double rate;
};

/// Pauli jump operators P_k with rates gamma_k >= 0.
class DissipatorSet {
  public:
    DissipatorSet() = default;
    DissipatorSet(int n, std::vector<Dissipator> terms);

    int qubits() const noexcept { return n_; }
    const std::vector<Dissipator>& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool empty() const noexcept { return terms_.empty(); }
    /// Sum of all rates.
    double total_rate() const noexcept { return total_rate_; }

  private:
    int n_ = 0;
    std::vector<Dissipator> terms_;
    double total_rate_ = 0.0;
};

struct DisorderRealization {
    std::vector<double> fields;
    double strength = 0.0;
    std::uint64_t seed = 0;
};

/// Draws V_i uniformly from [-h, h].
DisorderRealization draw_disorder(int n, double h, std::uint64_t seed);

/// H = -J sum_<ij> (X_i X_j + Y_i Y_j) over nearest-neighbour edges.
OperatorMatrix build_xy(const Geometry& geometry, double coupling,
                        const NumericPolicy& policy = default_policy());

/// H = -J sum_{i=0}^{n-2} (XX + YY + ZZ)_{i,i+1} + sum_{i=0}^{n-1} V_i Z_i
std::pair<OperatorMatrix, DisorderRealization> build_heisenberg_disordered(
    int n, double coupling, double h, std::uint64_t seed, const NumericPolicy& policy = default_policy());

/// Z on every qubit with equal rate gamma.
DissipatorSet build_uniform_dephasing(int n, double gamma);

/// sum_i Z_i as a dense operator.
OperatorMatrix total_magnetization(int n);

}  // namespace oqsim

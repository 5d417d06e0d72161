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

// Hot loops of the engine. Each kernel has an OpenMP version used by the
// library and a plain serial version kept as the reference the tests and
// benchmarks compare against.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "oqsim/common.hpp"
#include "oqsim/pauli.hpp"

namespace oqsim::kernels {

struct WeightedPauli {
    double weight;
    const PauliString* string;
};

/// Dense-matrix inputs of a trajectory run. Pointers/spans are non-owning
/// and must outlive the call.
struct TrajectoryProblem {
    const Matrix* u0 = nullptr;                 // no-jump unitary
    std::span<const double> cumulative;         // size D+1; cumulative[0] = p0, back() == 1
    std::span<const PauliString> jumps;         // size D
    std::span<const PauliSum> observables;
    std::span<const Vector> initial_components; // pure components of rho0
    std::span<const double> initial_cumulative; // cumulative weights of the components
    int steps = 0;
    std::uint64_t trajectories = 0;
    std::uint64_t seed = 0;
};

/// Per-(step, observable) first and second moments, row-major with
/// steps+1 rows (row 0 is the initial state).
struct TrajectorySums {
    int steps = 0;
    int observables = 0;
    std::vector<double> sum;
    std::vector<double> sum_sq;

    double& at(std::vector<double>& v, int step, int obs) {
        return v[static_cast<std::size_t>(step) * observables + obs];
    }
};

/// Trajectories per reduction chunk. Chunk boundaries depend only on the
/// trajectory count, which makes the OpenMP reduction order fixed.
inline constexpr std::uint64_t kTrajectoryChunk = 512;

/// Runs one trajectory, writing the observable values for steps 0..steps
/// into `values` (size (steps+1)*observables).
void run_trajectory(const TrajectoryProblem& prob, std::uint64_t index, Vector& psi, Vector& scratch,
                    std::span<double> values);

namespace serial {

/// out += sum_k w_k P_k rho P_k
void pauli_conjugation_sum(const Matrix& rho, std::span<const WeightedPauli> terms, Matrix& out);

TrajectorySums sample_trajectories(const TrajectoryProblem& prob);

}  // namespace serial

namespace omp {

void pauli_conjugation_sum(const Matrix& rho, std::span<const WeightedPauli> terms, Matrix& out);

/// Statistics are bit-identical for any thread count.
TrajectorySums sample_trajectories(const TrajectoryProblem& prob);

}  // namespace omp

/// Caps OpenMP parallelism for subsequent kernel calls (<= 0 leaves the
/// runtime default).
void set_max_threads(int threads);
int max_threads();

}  // namespace oqsim::kernels

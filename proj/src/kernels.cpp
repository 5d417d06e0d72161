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

#include "oqsim/kernels.hpp"

#include <algorithm>

#include <omp.h>

#include "oqsim/rng.hpp"

namespace oqsim::kernels {

namespace {

void check_conjugation_shapes(const Matrix& rho, std::span<const WeightedPauli> terms, const Matrix& out) {
    if (rho.rows() != out.rows() || rho.cols() != out.cols() || rho.rows() != rho.cols()) {
        throw DimensionError("pauli_conjugation_sum: shape mismatch");
    }
    for (const auto& t : terms) {
        if (dim_for_qubits(t.string->size()) != static_cast<std::size_t>(rho.rows())) {
            throw DimensionError("pauli_conjugation_sum: Pauli string " + t.string->str() +
                                 " does not match the state dimension");
        }
    }
}

// (P rho P)[a, c] = s(a^x) s(c^x) rho[a^x, c^x]; the i^{#Y} phases cancel.
inline void conjugate_column(const Matrix& rho, const WeightedPauli& term, Eigen::Index c, Matrix& out) {
    const std::uint64_t x = term.string->x_mask();
    const std::uint64_t z = term.string->z_mask();
    const auto dim = static_cast<std::uint64_t>(rho.rows());
    const auto cs = static_cast<std::uint64_t>(c) ^ x;
    const double col_sign = term.weight * z_sign(cs, z);
    const Complex* src = rho.data() + static_cast<Eigen::Index>(cs) * rho.rows();
    Complex* dst = out.data() + c * out.rows();
    if (z == 0) {
        for (std::uint64_t a = 0; a < dim; ++a) {
            dst[a] += col_sign * src[a ^ x];
        }
    } else {
        for (std::uint64_t a = 0; a < dim; ++a) {
            dst[a] += (col_sign * z_sign(a ^ x, z)) * src[a ^ x];
        }
    }
}

std::size_t rows_of(const TrajectoryProblem& prob) {
    return static_cast<std::size_t>(prob.steps + 1) * prob.observables.size();
}

TrajectorySums empty_sums(const TrajectoryProblem& prob) {
    TrajectorySums sums;
    sums.steps = prob.steps;
    sums.observables = static_cast<int>(prob.observables.size());
    sums.sum.assign(rows_of(prob), 0.0);
    sums.sum_sq.assign(rows_of(prob), 0.0);
    return sums;
}

void check_problem(const TrajectoryProblem& prob) {
    if (prob.u0 == nullptr || prob.cumulative.size() != prob.jumps.size() + 1 || prob.initial_components.empty() ||
        prob.initial_components.size() != prob.initial_cumulative.size() || prob.steps < 0) {
        throw DimensionError("malformed trajectory problem");
    }
}

std::size_t draw_index(std::span<const double> cumulative, double u) {
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const auto idx = static_cast<std::size_t>(it - cumulative.begin());
    return std::min(idx, cumulative.size() - 1);
}

}  // namespace

void run_trajectory(const TrajectoryProblem& prob, std::uint64_t index, Vector& psi, Vector& scratch,
                    std::span<double> values) {
    auto eng = stream_engine(prob.seed, index);
    const std::size_t nobs = prob.observables.size();

    std::size_t component = 0;
    if (prob.initial_components.size() > 1) {
        component = draw_index(prob.initial_cumulative, uniform01(eng));
    }
    psi = prob.initial_components[component];
    scratch.resize(psi.size());

    for (std::size_t o = 0; o < nobs; ++o) {
        values[o] = pauli_sum_expectation(prob.observables[o], psi);
    }
    const auto dim = static_cast<std::uint64_t>(psi.size());
    for (int step = 1; step <= prob.steps; ++step) {
        const std::size_t alpha = draw_index(prob.cumulative, uniform01(eng));
        if (alpha == 0) {
            scratch.noalias() = (*prob.u0) * psi;
        } else {
            const PauliString& p = prob.jumps[alpha - 1];
            const std::uint64_t x = p.x_mask();
            const std::uint64_t z = p.z_mask();
            for (std::uint64_t b = 0; b < dim; ++b) {
                scratch[static_cast<Eigen::Index>(b ^ x)] = z_sign(b, z) * psi[static_cast<Eigen::Index>(b)];
            }
        }
        psi.swap(scratch);
        double* row = values.data() + static_cast<std::size_t>(step) * nobs;
        for (std::size_t o = 0; o < nobs; ++o) {
            row[o] = pauli_sum_expectation(prob.observables[o], psi);
        }
    }
}

namespace serial {

void pauli_conjugation_sum(const Matrix& rho, std::span<const WeightedPauli> terms, Matrix& out) {
    check_conjugation_shapes(rho, terms, out);
    for (const auto& term : terms) {
        for (Eigen::Index c = 0; c < rho.cols(); ++c) {
            conjugate_column(rho, term, c, out);
        }
    }
}

TrajectorySums sample_trajectories(const TrajectoryProblem& prob) {
    check_problem(prob);
    TrajectorySums sums = empty_sums(prob);
    const std::size_t rows = rows_of(prob);
    std::vector<CompensatedSum> s(rows), s2(rows);
    std::vector<double> values(rows);
    Vector psi, scratch;
    for (std::uint64_t t = 0; t < prob.trajectories; ++t) {
        run_trajectory(prob, t, psi, scratch, values);
        for (std::size_t r = 0; r < rows; ++r) {
            s[r].add(values[r]);
            s2[r].add(values[r] * values[r]);
        }
    }
    for (std::size_t r = 0; r < rows; ++r) {
        sums.sum[r] = s[r].value();
        sums.sum_sq[r] = s2[r].value();
    }
    return sums;
}

}  // namespace serial

namespace omp {

void pauli_conjugation_sum(const Matrix& rho, std::span<const WeightedPauli> terms, Matrix& out) {
    check_conjugation_shapes(rho, terms, out);
    const Eigen::Index cols = rho.cols();
#pragma omp parallel for schedule(static) if (cols >= 64)
    for (Eigen::Index c = 0; c < cols; ++c) {
        for (const auto& term : terms) {
            conjugate_column(rho, term, c, out);
        }
    }
}

TrajectorySums sample_trajectories(const TrajectoryProblem& prob) {
    check_problem(prob);
    TrajectorySums sums = empty_sums(prob);
    const std::size_t rows = rows_of(prob);
    const std::uint64_t chunks = (prob.trajectories + kTrajectoryChunk - 1) / kTrajectoryChunk;
    std::vector<double> partial_sum(chunks * rows, 0.0);
    std::vector<double> partial_sq(chunks * rows, 0.0);

#pragma omp parallel
    {
        std::vector<double> values(rows);
        Vector psi, scratch;
#pragma omp for schedule(dynamic)
        for (std::int64_t chunk = 0; chunk < static_cast<std::int64_t>(chunks); ++chunk) {
            const auto begin = static_cast<std::uint64_t>(chunk) * kTrajectoryChunk;
            const std::uint64_t end = std::min(prob.trajectories, begin + kTrajectoryChunk);
            double* ps = partial_sum.data() + static_cast<std::size_t>(chunk) * rows;
            double* pq = partial_sq.data() + static_cast<std::size_t>(chunk) * rows;
            for (std::uint64_t t = begin; t < end; ++t) {
                run_trajectory(prob, t, psi, scratch, values);
                for (std::size_t r = 0; r < rows; ++r) {
                    ps[r] += values[r];
                    pq[r] += values[r] * values[r];
                }
            }
        }
    }

    for (std::size_t r = 0; r < rows; ++r) {
        CompensatedSum s, s2;
        for (std::uint64_t chunk = 0; chunk < chunks; ++chunk) {
            s.add(partial_sum[chunk * rows + r]);
            s2.add(partial_sq[chunk * rows + r]);
        }
        sums.sum[r] = s.value();
        sums.sum_sq[r] = s2.value();
    }
    return sums;
}

}  // namespace omp

void set_max_threads(int threads) {
    if (threads > 0) {
        omp_set_num_threads(threads);
    }
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace oqsim::kernels

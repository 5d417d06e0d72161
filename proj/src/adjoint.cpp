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

#include "oqsim/adjoint.hpp"

#include <cmath>
#include <string>

#include "oqsim/kernels.hpp"

namespace oqsim {

AdjointChannel::AdjointChannel(OperatorMatrix u0, std::vector<JumpTerm> jumps, double p0, double total_rate,
                               double dt)
    : u0_(std::move(u0)), jumps_(std::move(jumps)), p0_(p0), total_rate_(total_rate), dt_(dt) {
    cumulative_.reserve(jumps_.size() + 1);
    CompensatedSum acc;
    acc.add(p0_);
    cumulative_.push_back(acc.value());
    for (const auto& j : jumps_) {
        if (j.string.size() != u0_.qubits()) {
            throw DimensionError("jump " + j.string.str() + " does not match the channel's qubit count");
        }
        acc.add(j.probability);
        cumulative_.push_back(acc.value());
    }
    if (std::abs(cumulative_.back() - 1.0) > 1e-12) {
        throw NumericError("channel probabilities sum to " + std::to_string(cumulative_.back()));
    }
    cumulative_.back() = 1.0;
}

AdjointChannel build_adjoint(const OperatorMatrix& h, const DissipatorSet& diss, double dt,
                             const NumericPolicy& policy) {
    if (!(dt > 0.0)) {
        throw ConfigError("dt must be positive");
    }
    if (!diss.empty() && diss.qubits() != h.qubits()) {
        throw DimensionError("dissipators and Hamiltonian act on different qubit counts");
    }
    OperatorMatrix u0 = hermitian_exponential(h, dt, policy);
    const double total = diss.total_rate();
    const double norm = 1.0 + total * dt;
    std::vector<JumpTerm> jumps;
    for (const auto& t : diss.terms()) {
        if (t.rate > 0.0) {
            jumps.push_back({t.rate * dt / norm, t.string});
        }
    }
    return AdjointChannel(std::move(u0), std::move(jumps), 1.0 / norm, total, dt);
}

Matrix apply_adjoint(const AdjointChannel& ch, const Matrix& rho) {
    if (static_cast<std::size_t>(rho.rows()) != ch.u0().dim() || rho.rows() != rho.cols()) {
        throw DimensionError("state dimension does not match the channel");
    }
    const Matrix& u = ch.u0().matrix();
    Matrix out = ch.p0() * (u * rho * u.adjoint());
    std::vector<kernels::WeightedPauli> terms;
    terms.reserve(ch.jumps().size());
    for (const auto& j : ch.jumps()) {
        terms.push_back({j.probability, &j.string});
    }
    kernels::omp::pauli_conjugation_sum(rho, terms, out);
    return out;
}

DensityMatrix apply_adjoint(const AdjointChannel& ch, const DensityMatrix& rho) {
    return DensityMatrix::unchecked(apply_adjoint(ch, rho.matrix()));
}

std::vector<DensityMatrix> iterate_adjoint(const AdjointChannel& ch, const DensityMatrix& rho0, long m) {
    if (m < 1) {
        throw ConfigError("iterate_adjoint needs m >= 1");
    }
    std::vector<DensityMatrix> out;
    out.reserve(static_cast<std::size_t>(m));
    Matrix rho = rho0.matrix();
    for (long s = 0; s < m; ++s) {
        rho = apply_adjoint(ch, rho);
        out.push_back(DensityMatrix::unchecked(rho));
    }
    return out;
}

double steady_state_defect(const AdjointChannel& ch, const DensityMatrix& rho) {
    return max_abs(apply_adjoint(ch, rho.matrix()) - rho.matrix());
}

TrajectoryBatch::TrajectoryBatch(std::uint64_t trajectories, std::uint64_t seed, int steps,
                                 std::vector<std::string> names, std::vector<double> sum, std::vector<double> sum_sq)
    : trajectories_(trajectories),
      seed_(seed),
      steps_(steps),
      names_(std::move(names)),
      sum_(std::move(sum)),
      sum_sq_(std::move(sum_sq)) {
    const std::size_t rows = static_cast<std::size_t>(steps_ + 1) * names_.size();
    if (trajectories_ < 1 || sum_.size() != rows || sum_sq_.size() != rows) {
        throw DimensionError("inconsistent trajectory batch");
    }
}

double TrajectoryBatch::mean(int step, int obs) const { return sum(step, obs) / static_cast<double>(trajectories_); }

double TrajectoryBatch::stderr_of_mean(int step, int obs) const {
    if (trajectories_ < 2) {
        return 0.0;
    }
    const double m = static_cast<double>(trajectories_);
    const double mu = mean(step, obs);
    const double var = std::max(0.0, (sum_sq(step, obs) - m * mu * mu) / (m - 1.0));
    return std::sqrt(var / m);
}

namespace {

TrajectoryBatch run_batch(const AdjointChannel& ch, std::span<const Vector> components,
                          std::span<const double> component_cumulative, int m, std::uint64_t trajectories,
                          std::uint64_t seed, std::span<const PauliSum> observables, std::vector<std::string> names,
                          Execution exec) {
    if (trajectories < 1) {
        throw ConfigError("trajectory count must be >= 1");
    }
    if (m < 0) {
        throw ConfigError("step count must be >= 0");
    }
    if (names.size() != observables.size()) {
        throw DimensionError("observable names and observables differ in length");
    }
    std::vector<PauliString> jumps;
    jumps.reserve(ch.jumps().size());
    for (const auto& j : ch.jumps()) {
        jumps.push_back(j.string);
    }
    for (const auto& obs : observables) {
        for (const auto& term : obs) {
            if (term.string.size() != ch.qubits()) {
                throw DimensionError("observable " + term.string.str() + " does not match the channel");
            }
        }
    }
    kernels::TrajectoryProblem prob;
    prob.u0 = &ch.u0().matrix();
    prob.cumulative = ch.cumulative();
    prob.jumps = jumps;
    prob.observables = observables;
    prob.initial_components = components;
    prob.initial_cumulative = component_cumulative;
    prob.steps = m;
    prob.trajectories = trajectories;
    prob.seed = seed;
    kernels::TrajectorySums sums =
        exec == Execution::parallel ? kernels::omp::sample_trajectories(prob) : kernels::serial::sample_trajectories(prob);
    return TrajectoryBatch(trajectories, seed, m, std::move(names), std::move(sums.sum), std::move(sums.sum_sq));
}

}  // namespace

TrajectoryBatch sample_trajectories(const AdjointChannel& ch, const StateVector& psi0, int m,
                                    std::uint64_t trajectories, std::uint64_t seed,
                                    std::span<const PauliString> observables, Execution exec) {
    std::vector<PauliSum> sums;
    std::vector<std::string> names;
    for (const auto& ps : observables) {
        sums.push_back({PauliTerm{1.0, ps}});
        names.push_back(ps.str());
    }
    return sample_trajectories(ch, psi0, m, trajectories, seed, sums, std::move(names), exec);
}

TrajectoryBatch sample_trajectories(const AdjointChannel& ch, const StateVector& psi0, int m,
                                    std::uint64_t trajectories, std::uint64_t seed,
                                    std::span<const PauliSum> observables, std::vector<std::string> names,
                                    Execution exec) {
    if (psi0.dim() != ch.u0().dim()) {
        throw DimensionError("initial state does not match the channel");
    }
    const std::vector<Vector> components{psi0.amplitudes()};
    const std::vector<double> cumulative{1.0};
    return run_batch(ch, components, cumulative, m, trajectories, seed, observables, std::move(names), exec);
}

TrajectoryBatch sample_trajectories(const AdjointChannel& ch, const DensityMatrix& rho0, int m,
                                    std::uint64_t trajectories, std::uint64_t seed,
                                    std::span<const PauliSum> observables, std::vector<std::string> names,
                                    Execution exec) {
    if (rho0.dim() != ch.u0().dim()) {
        throw DimensionError("initial state does not match the channel");
    }
    const Matrix herm = 0.5 * (rho0.matrix() + rho0.matrix().adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm);
    if (solver.info() != Eigen::Success) {
        throw NumericError("eigendecomposition of the initial state failed");
    }
    std::vector<Vector> components;
    std::vector<double> weights;
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
        const double lambda = solver.eigenvalues()[k];
        if (lambda > 1e-14) {
            components.emplace_back(solver.eigenvectors().col(k));
            weights.push_back(lambda);
        }
    }
    CompensatedSum total;
    for (double w : weights) {
        total.add(w);
    }
    std::vector<double> cumulative;
    CompensatedSum acc;
    for (double w : weights) {
        acc.add(w / total.value());
        cumulative.push_back(acc.value());
    }
    cumulative.back() = 1.0;
    return run_batch(ch, components, cumulative, m, trajectories, seed, observables, std::move(names), exec);
}

}  // namespace oqsim

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
#include <span>
#include <string>
#include <vector>

#include "oqsim/models.hpp"
#include "oqsim/operators.hpp"

namespace oqsim {

struct JumpTerm {
    double probability;
    PauliString string;
};

/// Mixed-unitary surrogate of one Euler step of Lindblad dynamics:
///
///   F(rho) = [U rho U^dagger + dt sum_k gamma_k P_k rho P_k] / (1 + Gamma dt),
///   U = exp(-i H dt).
///
/// Every Kraus operator is proportional to a unitary, so F is exactly trace
/// preserving and can be sampled by drawing one unitary per step.
class AdjointChannel {
  public:
    AdjointChannel(OperatorMatrix u0, std::vector<JumpTerm> jumps, double p0, double total_rate, double dt);

    const OperatorMatrix& u0() const noexcept { return u0_; }
    const std::vector<JumpTerm>& jumps() const noexcept { return jumps_; }
    double p0() const noexcept { return p0_; }
    double total_rate() const noexcept { return total_rate_; }
    double dt() const noexcept { return dt_; }
    int qubits() const noexcept { return u0_.qubits(); }

    /// p0, p0 + p1, ..., 1.
    const std::vector<double>& cumulative() const noexcept { return cumulative_; }

  private:
    OperatorMatrix u0_;
    std::vector<JumpTerm> jumps_;
    double p0_;
    double total_rate_;
    double dt_;
    std::vector<double> cumulative_;
};

AdjointChannel build_adjoint(const OperatorMatrix& h, const DissipatorSet& diss, double dt,
                             const NumericPolicy& policy = default_policy());

Matrix apply_adjoint(const AdjointChannel& ch, const Matrix& rho);
DensityMatrix apply_adjoint(const AdjointChannel& ch, const DensityMatrix& rho);

/// [F(rho0), F^2(rho0), ..., F^m(rho0)]
std::vector<DensityMatrix> iterate_adjoint(const AdjointChannel& ch, const DensityMatrix& rho0, long m);

/// ||F(rho) - rho||_max
double steady_state_defect(const AdjointChannel& ch, const DensityMatrix& rho);

/// Per-step trajectory statistics. Row 0 is the initial state.
class TrajectoryBatch {
  public:
    TrajectoryBatch(std::uint64_t trajectories, std::uint64_t seed, int steps, std::vector<std::string> names,
                    std::vector<double> sum, std::vector<double> sum_sq);

    std::uint64_t trajectories() const noexcept { return trajectories_; }
    std::uint64_t seed() const noexcept { return seed_; }
    int steps() const noexcept { return steps_; }
    const std::vector<std::string>& names() const noexcept { return names_; }
    int observables() const noexcept { return static_cast<int>(names_.size()); }

    double sum(int step, int obs) const { return sum_.at(index(step, obs)); }
    double sum_sq(int step, int obs) const { return sum_sq_.at(index(step, obs)); }
    double mean(int step, int obs) const;
    /// Sample standard deviation / sqrt(M); zero for M = 1.
    double stderr_of_mean(int step, int obs) const;

    friend bool operator==(const TrajectoryBatch&, const TrajectoryBatch&) = default;

  private:
    std::size_t index(int step, int obs) const {
        return static_cast<std::size_t>(step) * names_.size() + static_cast<std::size_t>(obs);
    }

    std::uint64_t trajectories_;
    std::uint64_t seed_;
    int steps_;
    std::vector<std::string> names_;
    std::vector<double> sum_;
    std::vector<double> sum_sq_;
};

enum class Execution { parallel, serial };

/// Monte Carlo estimate of Tr[F^t(rho0) O] for t = 0..m. Each trajectory
/// draws U0 or a jump P_k at every step with the channel probabilities.
TrajectoryBatch sample_trajectories(const AdjointChannel& ch, const StateVector& psi0, int m,
                                    std::uint64_t trajectories, std::uint64_t seed,
                                    std::span<const PauliString> observables,
                                    Execution exec = Execution::parallel);

/// As above for weighted Pauli sums (e.g. the imbalance). Names label the
/// rows of the batch.
TrajectoryBatch sample_trajectories(const AdjointChannel& ch, const StateVector& psi0, int m,
                                    std::uint64_t trajectories, std::uint64_t seed,
                                    std::span<const PauliSum> observables, std::vector<std::string> names,
                                    Execution exec = Execution::parallel);

/// Mixed initial state: each trajectory starts from an eigenvector of rho0
/// drawn with probability equal to its eigenvalue.
TrajectoryBatch sample_trajectories(const AdjointChannel& ch, const DensityMatrix& rho0, int m,
                                    std::uint64_t trajectories, std::uint64_t seed,
                                    std::span<const PauliSum> observables, std::vector<std::string> names,
                                    Execution exec = Execution::parallel);

}  // namespace oqsim

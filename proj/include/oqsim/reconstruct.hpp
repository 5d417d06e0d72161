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

// Recovery of the dissipated dynamics from the adjoint series.
//
// With a = Gamma dt, the adjoint state after m steps is a binomial mixture
// of the true states,
//
//   F^m(rho0) = (1 + a)^{-m} sum_{x=0}^{m} C(m, x) a^{m-x} rho_x,
//
// so rho_m follows from F^m(rho0) and the history rho_0 .. rho_{m-1}. It is
// evaluated in difference form
//
//   rho_m = F^m + sum_{x<m} C(m, x) a^{m-x} (F^m - rho_x),
//
// where the coefficient of each term is w_x / w_m for the Binomial(m, p)
// pmf w with p = a / (1 + a).

#pragma once

#include <span>
#include <vector>

#include "oqsim/adjoint.hpp"
#include "oqsim/observables.hpp"
#include "oqsim/operators.hpp"
#include "oqsim/timeseries.hpp"

namespace oqsim {

struct BinomialWeights {
    long m = 0;
    double p = 0.0;          // Gamma dt / (1 + Gamma dt)
    std::vector<double> w;   // w[x] = C(m, x) p^{m-x} (1-p)^x, x = 0..m
};

/// Binomial pmf built outward from its mode by the multiplicative
/// recurrence, normalized with compensated summation. Safe for m up to 1e5
/// and beyond.
BinomialWeights binomial_weights(long m, double total_rate, double dt);

/// Coefficients C(m, x) a^{m-x} for x = 0..m-1, with terms whose binomial
/// weight is below `truncation_eps` times the largest weight set to zero.
/// Throws NumericError if the amplification (1 + a)^m overflows.
std::vector<double> reconstruction_coefficients(long m, double total_rate, double dt, double truncation_eps);

struct Strategy {
    enum class Kind { reconstructed, adjoint_direct };
    Kind kind = Kind::reconstructed;
    double truncation_eps = 1e-12;
};

const char* strategy_name(Strategy::Kind kind);

/// History of reconstructed states rho_0 .. rho_{m-1}, or of scalar
/// expectations Tr[rho_x O] per observable when matrices are too large.
class ReconstructionLedger {
  public:
    enum class Storage { matrices, scalars };

    static ReconstructionLedger for_states(const DensityMatrix& rho0, double total_rate, double dt,
                                           double truncation_eps = 1e-12);
    static ReconstructionLedger for_scalars(std::vector<double> initial_values, double total_rate, double dt,
                                            double truncation_eps = 1e-12);

    Storage storage() const noexcept { return storage_; }
    std::size_t size() const noexcept;
    double total_rate() const noexcept { return total_rate_; }
    double dt() const noexcept { return dt_; }
    double truncation_eps() const noexcept { return truncation_eps_; }

    const DensityMatrix& state(std::size_t x) const { return states_.at(x); }
    /// Tr[rho_x O_obs] for x = 0..size()-1.
    std::span<const double> values(std::size_t obs) const { return scalars_.at(obs); }
    std::size_t observables() const noexcept { return scalars_.size(); }

    void append(DensityMatrix rho);
    void append(std::span<const double> values);

  private:
    ReconstructionLedger(Storage storage, double total_rate, double dt, double truncation_eps);

    Storage storage_;
    double total_rate_;
    double dt_;
    double truncation_eps_;
    std::vector<DensityMatrix> states_;
    std::vector<std::vector<double>> scalars_;
};

/// Reconstructs rho_m from F^m(rho0) and appends it to the ledger, which
/// must hold exactly entries 0..m-1.
DensityMatrix reconstruct_state(const DensityMatrix& adjoint_m, ReconstructionLedger& ledger, long m);

/// Scalar analogue: Tr[rho_m O] from Tr[F^m(rho0) O] and Tr[rho_x O], x < m.
double reconstruct_expectation(double adjoint_value, std::span<const double> ledger_values, long m,
                               double total_rate, double dt, double truncation_eps = 1e-12);

/// Full scalar series: adjoint_values[t] = Tr[F^t(rho0) O] for t = 0..m
/// (adjoint_values[0] is the initial expectation).
std::vector<double> reconstruct_scalar_series(std::span<const double> adjoint_values, double total_rate, double dt,
                                              double truncation_eps = 1e-12);

struct StrategyDiagnostics {
    double min_eigenvalue = 1.0;   // over reconstructed states; negativity is reported, not clamped
    double max_trace_error = 0.0;  // |Tr rho_m - 1|
    double max_hermiticity_defect = 0.0;
    long entropy_rejections = 0;   // steps whose entropy was recorded as NaN (state below entropy_reject)
    ReconstructionLedger::Storage storage = ReconstructionLedger::Storage::matrices;
    std::vector<DensityMatrix> final_states;  // last state per method, if matrices are tracked
};

/// Dense-matrix ledger is used automatically up to this many qubits.
inline constexpr int kAutoMatrixLedgerMaxQubits = 10;

/// Exact-channel pipeline: iterates F on rho0 and reports the observables
/// either after reconstruction or directly on F^t(rho0), for t = 0..m.
/// Reconstructed states are not projected onto the PSD cone; when one falls
/// below policy.entropy_reject its entropy is recorded as NaN and counted in
/// the diagnostics.
TimeSeries run_with_strategy(const AdjointChannel& ch, const DensityMatrix& rho0, long m,
                             std::span<const ObservableSpec> observables, const Strategy& strategy,
                             std::optional<ReconstructionLedger::Storage> storage = std::nullopt,
                             StrategyDiagnostics* diagnostics = nullptr,
                             const NumericPolicy& policy = default_policy());

/// ObservableSpec::evaluate, except that a rejected entropy input yields NaN
/// and increments `rejections` when given.
double evaluate_or_nan(const ObservableSpec& o, const DensityMatrix& rho, const NumericPolicy& policy,
                       long* rejections = nullptr);

}  // namespace oqsim

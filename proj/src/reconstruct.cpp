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

#include "oqsim/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace oqsim {

BinomialWeights binomial_weights(long m, double total_rate, double dt) {
    if (m < 0) {
        throw ConfigError("binomial_weights needs m >= 0");
    }
    if (!(total_rate >= 0.0) || !(dt > 0.0)) {
        throw ConfigError("binomial_weights needs Gamma >= 0 and dt > 0");
    }
    const double a = total_rate * dt;
    BinomialWeights bw;
    bw.m = m;
    bw.p = a / (1.0 + a);
    bw.w.assign(static_cast<std::size_t>(m + 1), 0.0);
    if (bw.p == 0.0 || m == 0) {
        bw.w.back() = 1.0;
        return bw;
    }
    const double p = bw.p;
    const double q = 1.0 - p;
    const double ratio_up = q / p;  // w[x+1] / w[x] = (m-x)/(x+1) * q/p
    const long mode = std::min(m, static_cast<long>(std::floor(static_cast<double>(m + 1) * q)));
    const double md = static_cast<double>(m);
    const double xd = static_cast<double>(mode);
    const double log_mode = std::lgamma(md + 1.0) - std::lgamma(xd + 1.0) - std::lgamma(md - xd + 1.0) +
                            (md - xd) * std::log(p) + xd * std::log1p(-p);
    auto& w = bw.w;
    w[static_cast<std::size_t>(mode)] = std::exp(log_mode);
    for (long x = mode; x < m; ++x) {
        w[static_cast<std::size_t>(x + 1)] =
            w[static_cast<std::size_t>(x)] * (static_cast<double>(m - x) / static_cast<double>(x + 1)) * ratio_up;
    }
    for (long x = mode; x > 0; --x) {
        w[static_cast<std::size_t>(x - 1)] =
            w[static_cast<std::size_t>(x)] * (static_cast<double>(x) / static_cast<double>(m - x + 1)) / ratio_up;
    }
    CompensatedSum total;
    for (double v : w) {
        total.add(v);
    }
    const double s = total.value();
    for (double& v : w) {
        v /= s;
    }
    return bw;
}

std::vector<double> reconstruction_coefficients(long m, double total_rate, double dt, double truncation_eps) {
    if (!(truncation_eps >= 0.0 && truncation_eps < 1.0)) {
        throw ConfigError("truncation_eps must lie in [0, 1)");
    }
    const BinomialWeights bw = binomial_weights(m, total_rate, dt);
    std::vector<double> c(static_cast<std::size_t>(m), 0.0);
    if (bw.p == 0.0) {
        return c;
    }
    const double w_last = bw.w.back();
    if (!(w_last > 0.0) || !std::isfinite(1.0 / w_last)) {
        throw NumericError("reconstruction amplification (1 + Gamma dt)^m overflows; use the adjoint_direct strategy",
                           m);
    }
    const double w_max = *std::max_element(bw.w.begin(), bw.w.end());
    const double cutoff = truncation_eps * w_max;
    for (long x = 0; x < m; ++x) {
        const double wx = bw.w[static_cast<std::size_t>(x)];
        if (wx >= cutoff && wx > 0.0) {
            c[static_cast<std::size_t>(x)] = wx / w_last;
        }
    }
    return c;
}

const char* strategy_name(Strategy::Kind kind) {
    return kind == Strategy::Kind::reconstructed ? method_names::reconstructed : method_names::adjoint_direct;
}

ReconstructionLedger::ReconstructionLedger(Storage storage, double total_rate, double dt, double truncation_eps)
    : storage_(storage), total_rate_(total_rate), dt_(dt), truncation_eps_(truncation_eps) {
    if (!(truncation_eps >= 0.0 && truncation_eps < 1.0)) {
        throw ConfigError("truncation_eps must lie in [0, 1)");
    }
}

ReconstructionLedger ReconstructionLedger::for_states(const DensityMatrix& rho0, double total_rate, double dt,
                                                      double truncation_eps) {
    ReconstructionLedger ledger(Storage::matrices, total_rate, dt, truncation_eps);
    ledger.states_.push_back(rho0);
    return ledger;
}

ReconstructionLedger ReconstructionLedger::for_scalars(std::vector<double> initial_values, double total_rate,
                                                       double dt, double truncation_eps) {
    ReconstructionLedger ledger(Storage::scalars, total_rate, dt, truncation_eps);
    for (double v : initial_values) {
        ledger.scalars_.push_back({v});
    }
    return ledger;
}

std::size_t ReconstructionLedger::size() const noexcept {
    if (storage_ == Storage::matrices) {
        return states_.size();
    }
    return scalars_.empty() ? 0 : scalars_.front().size();
}

void ReconstructionLedger::append(DensityMatrix rho) {
    if (storage_ != Storage::matrices) {
        throw DimensionError("scalar ledger cannot store matrices");
    }
    if (rho.dim() != states_.front().dim()) {
        throw DimensionError("ledger state dimension mismatch");
    }
    states_.push_back(std::move(rho));
}

void ReconstructionLedger::append(std::span<const double> values) {
    if (storage_ != Storage::scalars) {
        throw DimensionError("matrix ledger cannot store scalars");
    }
    if (values.size() != scalars_.size()) {
        throw DimensionError("ledger expects " + std::to_string(scalars_.size()) + " values per entry");
    }
    for (std::size_t o = 0; o < values.size(); ++o) {
        scalars_[o].push_back(values[o]);
    }
}

DensityMatrix reconstruct_state(const DensityMatrix& adjoint_m, ReconstructionLedger& ledger, long m) {
    if (ledger.storage() != ReconstructionLedger::Storage::matrices) {
        throw DimensionError("reconstruct_state needs a matrix ledger");
    }
    if (m < 1 || ledger.size() != static_cast<std::size_t>(m)) {
        throw DimensionError("ledger holds " + std::to_string(ledger.size()) + " entries; step " + std::to_string(m) +
                             " needs entries 0.." + std::to_string(m - 1));
    }
    if (adjoint_m.dim() != ledger.state(0).dim()) {
        throw DimensionError("adjoint state dimension does not match the ledger");
    }
    const std::vector<double> c =
        reconstruction_coefficients(m, ledger.total_rate(), ledger.dt(), ledger.truncation_eps());
    const Matrix& f = adjoint_m.matrix();
    Matrix correction = Matrix::Zero(f.rows(), f.cols());
    for (long x = 0; x < m; ++x) {
        const double cx = c[static_cast<std::size_t>(x)];
        if (cx != 0.0) {
            correction.noalias() += cx * (f - ledger.state(static_cast<std::size_t>(x)).matrix());
        }
    }
    DensityMatrix rho = DensityMatrix::unchecked(f + correction);
    ledger.append(rho);
    return rho;
}

double reconstruct_expectation(double adjoint_value, std::span<const double> ledger_values, long m,
                               double total_rate, double dt, double truncation_eps) {
    if (m < 1 || ledger_values.size() != static_cast<std::size_t>(m)) {
        throw DimensionError("reconstruct_expectation: expected " + std::to_string(m) + " ledger values, got " +
                             std::to_string(ledger_values.size()));
    }
    const std::vector<double> c = reconstruction_coefficients(m, total_rate, dt, truncation_eps);
    CompensatedSum correction;
    for (long x = 0; x < m; ++x) {
        const double cx = c[static_cast<std::size_t>(x)];
        if (cx != 0.0) {
            correction.add(cx * (adjoint_value - ledger_values[static_cast<std::size_t>(x)]));
        }
    }
    return adjoint_value + correction.value();
}

std::vector<double> reconstruct_scalar_series(std::span<const double> adjoint_values, double total_rate, double dt,
                                              double truncation_eps) {
    if (adjoint_values.empty()) {
        return {};
    }
    std::vector<double> out{adjoint_values[0]};
    out.reserve(adjoint_values.size());
    for (std::size_t s = 1; s < adjoint_values.size(); ++s) {
        out.push_back(
            reconstruct_expectation(adjoint_values[s], out, static_cast<long>(s), total_rate, dt, truncation_eps));
    }
    return out;
}

namespace {

struct LinearHandles {
    std::vector<std::size_t> index;  // observable position
    std::vector<PauliSum> sums;
};

double pauli_sum_value(const DensityMatrix& rho, const PauliSum& sum) {
    double acc = 0.0;
    for (const auto& term : sum) {
        acc += term.coeff * expectation(rho, term.string);
    }
    return acc;
}

void track(const DensityMatrix& rho, StrategyDiagnostics* diag) {
    if (diag == nullptr) {
        return;
    }
    diag->min_eigenvalue = std::min(diag->min_eigenvalue, rho.min_eigenvalue());
    diag->max_trace_error = std::max(diag->max_trace_error, std::abs(rho.trace() - 1.0));
    diag->max_hermiticity_defect = std::max(diag->max_hermiticity_defect, hermiticity_defect(rho.matrix()));
}

}  // namespace

double evaluate_or_nan(const ObservableSpec& o, const DensityMatrix& rho, const NumericPolicy& policy,
                       long* rejections) {
    if (o.is_linear()) {
        return o.evaluate(rho, policy);
    }
    try {
        return o.evaluate(rho, policy);
    } catch (const NumericError&) {
        if (rejections != nullptr) {
            ++*rejections;
        }
        return std::numeric_limits<double>::quiet_NaN();
    }
}

TimeSeries run_with_strategy(const AdjointChannel& ch, const DensityMatrix& rho0, long m,
                             std::span<const ObservableSpec> observables, const Strategy& strategy,
                             std::optional<ReconstructionLedger::Storage> storage, StrategyDiagnostics* diagnostics,
                             const NumericPolicy& policy) {
    const int n = rho0.qubits();
    if (rho0.dim() != ch.u0().dim()) {
        throw DimensionError("initial state does not match the channel");
    }
    if (m < 0) {
        throw ConfigError("step count must be >= 0");
    }
    for (const auto& o : observables) {
        o.validate(n);
    }
    const auto store = storage.value_or(n <= kAutoMatrixLedgerMaxQubits ? ReconstructionLedger::Storage::matrices
                                                                        : ReconstructionLedger::Storage::scalars);
    if (diagnostics != nullptr) {
        diagnostics->storage = store;
    }
    const std::string method = strategy_name(strategy.kind);
    const double dt = ch.dt();
    TimeSeries ts;
    auto record_all = [&](long step, const DensityMatrix& rho) {
        for (const auto& o : observables) {
            ts.add(static_cast<double>(step) * dt, o.name(),
                   evaluate_or_nan(o, rho, policy, diagnostics ? &diagnostics->entropy_rejections : nullptr),
                   std::nullopt, method);
        }
    };

    const bool reconstruct = strategy.kind == Strategy::Kind::reconstructed;
    if (!reconstruct || store == ReconstructionLedger::Storage::matrices) {
        record_all(0, rho0);
        std::optional<ReconstructionLedger> ledger;
        if (reconstruct) {
            ledger = ReconstructionLedger::for_states(rho0, ch.total_rate(), dt, strategy.truncation_eps);
        }
        Matrix f = rho0.matrix();
        DensityMatrix last = rho0;
        for (long s = 1; s <= m; ++s) {
            f = apply_adjoint(ch, f);
            DensityMatrix adj = DensityMatrix::unchecked(f);
            last = reconstruct ? reconstruct_state(adj, *ledger, s) : std::move(adj);
            track(last, diagnostics);
            record_all(s, last);
        }
        if (diagnostics != nullptr) {
            diagnostics->final_states.push_back(last);
        }
        return ts;
    }

    // Scalar ledger: only linear observables can be reconstructed.
    LinearHandles lin;
    for (std::size_t k = 0; k < observables.size(); ++k) {
        auto sum = observables[k].as_pauli_sum(n);
        if (!sum) {
            throw ConfigError("observable " + observables[k].name() +
                              " is nonlinear in the state and needs the matrix ledger");
        }
        lin.index.push_back(k);
        lin.sums.push_back(std::move(*sum));
    }
    std::vector<double> initial;
    for (const auto& sum : lin.sums) {
        initial.push_back(pauli_sum_value(rho0, sum));
    }
    ReconstructionLedger ledger =
        ReconstructionLedger::for_scalars(initial, ch.total_rate(), dt, strategy.truncation_eps);
    for (std::size_t k = 0; k < lin.sums.size(); ++k) {
        ts.add(0.0, observables[lin.index[k]].name(), initial[k], std::nullopt, method);
    }
    Matrix f = rho0.matrix();
    std::vector<double> row(lin.sums.size());
    for (long s = 1; s <= m; ++s) {
        f = apply_adjoint(ch, f);
        const DensityMatrix adj = DensityMatrix::unchecked(f);
        for (std::size_t k = 0; k < lin.sums.size(); ++k) {
            row[k] = reconstruct_expectation(pauli_sum_value(adj, lin.sums[k]), ledger.values(k), s, ch.total_rate(),
                                             dt, strategy.truncation_eps);
            ts.add(static_cast<double>(s) * dt, observables[lin.index[k]].name(), row[k], std::nullopt, method);
        }
        ledger.append(row);
    }
    return ts;
}

}  // namespace oqsim

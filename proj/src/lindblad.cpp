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

#include "oqsim/lindblad.hpp"

#include <cmath>
#include <string>

#include "oqsim/kernels.hpp"

namespace oqsim {

long EvolutionParams::steps() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ConfigError("dt must be positive, got " + std::to_string(dt));
    }
    if (!(total_time >= dt - 1e-12)) {
        throw ConfigError("T must be at least dt");
    }
    const long m = std::lround(total_time / dt);
    if (std::abs(static_cast<double>(m) * dt - total_time) >= 1e-9) {
        throw ConfigError("T = " + std::to_string(total_time) + " is not an integer multiple of dt = " +
                          std::to_string(dt));
    }
    if (substeps < 1) {
        throw ConfigError("substeps must be >= 1");
    }
    return m;
}

namespace {

std::vector<kernels::WeightedPauli> weighted_terms(const DissipatorSet& diss, double scale) {
    std::vector<kernels::WeightedPauli> terms;
    terms.reserve(diss.size());
    for (const auto& t : diss.terms()) {
        if (t.rate > 0.0) {
            terms.push_back({scale * t.rate, &t.string});
        }
    }
    return terms;
}

void check_dims(const Matrix& rho, const OperatorMatrix& h, const DissipatorSet& diss) {
    if (static_cast<std::size_t>(rho.rows()) != h.dim() || rho.rows() != rho.cols()) {
        throw DimensionError("state and Hamiltonian dimensions differ");
    }
    if (!diss.empty() && diss.qubits() != h.qubits()) {
        throw DimensionError("dissipators and Hamiltonian act on different qubit counts");
    }
}

}  // namespace

Matrix lindblad_rhs(const Matrix& rho, const OperatorMatrix& h, const DissipatorSet& diss) {
    check_dims(rho, h, diss);
    const Matrix& hm = h.matrix();
    Matrix out = Complex(0.0, -1.0) * (hm * rho - rho * hm);
    // P_k^dagger P_k = I for Pauli strings, so the anticommutator collapses to -Gamma rho.
    out -= diss.total_rate() * rho;
    const auto terms = weighted_terms(diss, 1.0);
    kernels::omp::pauli_conjugation_sum(rho, terms, out);
    return out;
}

KrausStep euler_kraus_step(const DensityMatrix& rho, const OperatorMatrix& h, const DissipatorSet& diss, double dt) {
    check_dims(rho.matrix(), h, diss);
    const auto dim = static_cast<Eigen::Index>(h.dim());
    const Matrix m0 = Matrix::Identity(dim, dim) +
                      (Complex(0.0, -1.0) * h.matrix() - 0.5 * diss.total_rate() * Matrix::Identity(dim, dim)) * dt;
    Matrix out = m0 * rho.matrix() * m0.adjoint();
    const auto terms = weighted_terms(diss, dt);
    kernels::omp::pauli_conjugation_sum(rho.matrix(), terms, out);
    const double tr = out.trace().real();
    out /= tr;
    return {DensityMatrix::unchecked(std::move(out)), tr - 1.0};
}

double kraus_completeness_defect(const OperatorMatrix& h, const DissipatorSet& diss, double dt) {
    const auto dim = static_cast<Eigen::Index>(h.dim());
    const Matrix id = Matrix::Identity(dim, dim);
    const Matrix m0 = id + (Complex(0.0, -1.0) * h.matrix() - 0.5 * diss.total_rate() * id) * dt;
    Matrix total = m0.adjoint() * m0;
    for (const auto& t : diss.terms()) {
        const Matrix p = pauli_matrix(t.string);
        total += dt * t.rate * (p.adjoint() * p);
    }
    return max_abs(total - id);
}

ReferenceRun integrate_reference(const DensityMatrix& rho0, const OperatorMatrix& h, const DissipatorSet& diss,
                                 const EvolutionParams& params, const NumericPolicy& policy) {
    const long m = params.steps();
    check_dims(rho0.matrix(), h, diss);
    ReferenceRun run;
    run.states.reserve(static_cast<std::size_t>(m + 1));
    run.states.push_back(rho0);
    run.min_eigenvalue = rho0.min_eigenvalue();

    const double step = params.dt / params.substeps;
    Matrix rho = rho0.matrix();
    for (long s = 1; s <= m; ++s) {
        for (int sub = 0; sub < params.substeps; ++sub) {
            if (params.method == EvolutionParams::Method::rk4) {
                const Matrix k1 = lindblad_rhs(rho, h, diss);
                const Matrix k2 = lindblad_rhs(rho + 0.5 * step * k1, h, diss);
                const Matrix k3 = lindblad_rhs(rho + 0.5 * step * k2, h, diss);
                const Matrix k4 = lindblad_rhs(rho + step * k3, h, diss);
                rho += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            } else {
                KrausStep ks = euler_kraus_step(DensityMatrix::unchecked(rho), h, diss, step);
                run.max_trace_drift = std::max(run.max_trace_drift, std::abs(ks.trace_defect));
                rho = ks.state.matrix();
            }
            rho = 0.5 * (rho + rho.adjoint()).eval();
            const double tr = rho.trace().real();
            const double drift = std::abs(tr - 1.0);
            if (params.method == EvolutionParams::Method::rk4) {
                run.max_trace_drift = std::max(run.max_trace_drift, drift);
                if (drift > 1e-6) {
                    throw NumericError("reference integrator trace drift " + std::to_string(drift), s);
                }
            }
            rho /= tr;
        }
        DensityMatrix out = DensityMatrix::unchecked(rho);
        const double lmin = out.min_eigenvalue();
        run.min_eigenvalue = std::min(run.min_eigenvalue, lmin);
        if (lmin < policy.psd_abort) {
            throw NumericError("reference state lost positivity (min eigenvalue " + std::to_string(lmin) + ")", s);
        }
        run.states.push_back(std::move(out));
    }
    return run;
}

}  // namespace oqsim

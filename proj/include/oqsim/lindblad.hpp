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

// Reference integrators for the Lindblad equation with Pauli jump operators.
// These are the oracles the adjoint pipeline is validated against.

#pragma once

#include <vector>

#include "oqsim/models.hpp"
#include "oqsim/operators.hpp"

namespace oqsim {

struct EvolutionParams {
    enum class Method { rk4, euler_kraus };

    double dt = 0.05;
    double total_time = 1.0;
    Method method = Method::rk4;
    int substeps = 1;  // internal steps per output step

    /// Number of output steps; throws ConfigError if T/dt is not an integer
    /// to 1e-9 or if dt <= 0, T < dt.
    long steps() const;
};

/// -i[H, rho] + sum_k gamma_k P_k rho P_k - Gamma rho
Matrix lindblad_rhs(const Matrix& rho, const OperatorMatrix& h, const DissipatorSet& diss);

inline Matrix lindblad_rhs(const DensityMatrix& rho, const OperatorMatrix& h, const DissipatorSet& diss) {
    return lindblad_rhs(rho.matrix(), h, diss);
}

struct ReferenceRun {
    std::vector<DensityMatrix> states;  // t = 0, dt, ..., m dt
    double max_trace_drift = 0.0;       // largest |Tr - 1| before renormalization, per internal step
    double min_eigenvalue = 1.0;        // smallest eigenvalue seen at output steps
};

/// Classic RK4 on the Lindblad equation, renormalizing trace every internal
/// step. Throws NumericError with the step index if the state's min
/// eigenvalue drops below policy.psd_abort.
ReferenceRun integrate_reference(const DensityMatrix& rho0, const OperatorMatrix& h, const DissipatorSet& diss,
                                 const EvolutionParams& params, const NumericPolicy& policy = default_policy());

struct KrausStep {
    DensityMatrix state;
    double trace_defect;  // Tr(sum M rho M^dagger) - 1 before renormalization
};

/// One step of the first-order Kraus channel
/// M0 = I + (-iH - Gamma/2) dt, M_k = sqrt(gamma_k dt) P_k.
KrausStep euler_kraus_step(const DensityMatrix& rho, const OperatorMatrix& h, const DissipatorSet& diss, double dt);

/// ||sum_a M_a^dagger M_a - I||_max for the first-order Kraus set.
double kraus_completeness_defect(const OperatorMatrix& h, const DissipatorSet& diss, double dt);

}  // namespace oqsim

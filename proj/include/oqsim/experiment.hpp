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

// Experiment pipelines behind the command-line runner.

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "oqsim/adjoint.hpp"
#include "oqsim/config.hpp"
#include "oqsim/models.hpp"
#include "oqsim/timeseries.hpp"

namespace oqsim {

/// Hamiltonian, dissipators and initial state for one disorder realization.
struct ModelInstance {
    OperatorMatrix hamiltonian;
    DissipatorSet dissipators;
    StateVector initial_state;
    std::vector<double> initial_angles;  // product states only
    DisorderRealization disorder;        // empty fields for the XY models
};

/// `realization` offsets the disorder seed for disorder averaging.
ModelInstance build_model(const ExperimentConfig& cfg, int realization = 0);

/// Rough peak memory of run_experiment in bytes.
double estimate_memory_bytes(const ExperimentConfig& cfg);

/// Throws MemoryGuardError if the estimate exceeds cfg.memory_limit_gb.
void check_memory(const ExperimentConfig& cfg);

struct ExperimentResult {
    TimeSeries series;
    nlohmann::json metadata;
};

/// Runs the configured pipeline. With reference = true the RK4 series and
/// per-time differences ("diff_<method>") are emitted as well. Disorder
/// repeats are averaged record by record.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Writes results.csv and metadata.json into `dir` (created if needed).
void write_results(const ExperimentResult& result, const std::filesystem::path& dir);

struct SweepRow {
    double dt;
    std::string observable;
    double max_abs_error;
    double bound;  // T * dt
};

/// Max-in-time error of <Z0 Z1> and <Z0 Z_{n-1}> against the reference for
/// each dt. Runs are independent and execute concurrently; when `output_dir`
/// is non-empty each run writes into its own subdirectory.
std::vector<SweepRow> sweep_dt(const ExperimentConfig& cfg, std::span<const double> dts,
                               const std::filesystem::path& output_dir = {});

void write_sweep_csv(std::span<const SweepRow> rows, std::ostream& os);

struct MethodDeviation {
    std::string observable;
    double reconstructed_max = 0.0;   // max_t |reconstructed - reference|
    double adjoint_max = 0.0;         // max_t |adjoint_direct - reference|
    double reconstructed_early = 0.0; // same, restricted to t <= early_time
    double adjoint_early = 0.0;
    double final_gap = 0.0;           // |reconstructed - adjoint_direct| at t = T
};

struct MethodComparison {
    double early_time = 0.0;
    std::vector<MethodDeviation> deviations;
    /// ||F(rho_t) - rho_t||_max of the reconstructed state, t = 0..T.
    std::vector<double> steady_state_defect;
    TimeSeries series;
};

/// Runs both strategies against the reference on the exact channel.
MethodComparison compare_methods(const ExperimentConfig& cfg);

nlohmann::json comparison_json(const MethodComparison& cmp);

}  // namespace oqsim

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

// Experiment configuration files.
//
// One `key = value` pair per line; `#` starts a comment. Unknown or
// duplicate keys are errors. See docs/config.md for the schema.

#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oqsim/observables.hpp"
#include "oqsim/reconstruct.hpp"

namespace oqsim {

struct InitialStateConfig {
    enum class Kind { staggered, random_product, computational, product };
    Kind kind = Kind::staggered;
    std::uint64_t seed = 1;  // random_product
    std::string bits;        // computational
    double theta = 0.0;      // product: every site cos(theta)|0> + sin(theta)|1>
};

struct SamplerConfig {
    enum class Kind { exact_channel, trajectories };
    Kind kind = Kind::exact_channel;
    std::uint64_t trajectories = 10000;
    std::uint64_t seed = 1;
};

struct ExperimentConfig {
    enum class Model { xy_chain, xy_grid, heisenberg_disordered };

    std::string name = "experiment";
    Model model = Model::xy_chain;
    int n = 0;  // chain length; rows * cols for grids
    int rows = 1;
    int cols = 0;
    double coupling = -1.0;  // J, entering as H = -J sum(...)
    double gamma = 0.1;
    double disorder = 10.0;  // h
    std::uint64_t disorder_seed = 1;
    int disorder_repeats = 1;
    double dt = 0.05;
    double total_time = 5.0;
    Strategy strategy;
    SamplerConfig sampler;
    std::vector<ObservableSpec> observables;
    bool reference = false;
    int reference_substeps = 10;
    InitialStateConfig initial_state;
    std::optional<ReconstructionLedger::Storage> ledger;  // nullopt = automatic
    double entropy_reject = -1e-6;  // overrides NumericPolicy::entropy_reject for this run
    double memory_limit_gb = 8.0;
    bool long_running = false;

    int qubits() const noexcept { return n; }
    long steps() const;
    NumericPolicy policy() const;

    /// Canonical config text with every default resolved; parsing it gives
    /// back an equal config.
    std::string to_text() const;
};

const char* model_name(ExperimentConfig::Model model);

/// Throws ConfigError (with line numbers where applicable).
ExperimentConfig parse_config(std::istream& in, std::string name = "experiment");
ExperimentConfig parse_config_text(std::string_view text, std::string name = "experiment");

/// Reads a config file, or the `config_text` block of a metadata.json
/// written by a previous run.
ExperimentConfig parse_config_file(const std::filesystem::path& path);

}  // namespace oqsim

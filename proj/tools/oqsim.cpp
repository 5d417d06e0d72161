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

// Command-line experiment runner.
//
//   oqsim run <config>                      results.csv + metadata.json
//   oqsim sweep-dt <config> --dts 0.1 0.05  error table against the reference
//   oqsim compare <config>                  reconstructed vs adjoint_direct vs reference
//   oqsim validate <config>                 parse only, prints the resolved config
//
// Output goes to --output, or to $OQSIM_OUTPUT_ROOT/<config name> (default
// root ./oqsim-out). The exit code is 0 on success and the error category
// otherwise.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "oqsim/config.hpp"
#include "oqsim/experiment.hpp"
#include "oqsim/kernels.hpp"

namespace {

std::filesystem::path output_dir(const std::string& flag, const oqsim::ExperimentConfig& cfg) {
    if (!flag.empty()) {
        return flag;
    }
    const char* root = std::getenv("OQSIM_OUTPUT_ROOT");
    return std::filesystem::path(root != nullptr && *root != '\0' ? root : "oqsim-out") / cfg.name;
}

void note_long_running(const oqsim::ExperimentConfig& cfg) {
    if (cfg.long_running) {
        std::cerr << "note: " << cfg.name << " is flagged long_running (full-size run)\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"oqsim: open-system dynamics through the adjoint mixed-unitary channel"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(oqsim::kVersion));

    int threads = 0;
    app.add_option("--threads", threads, "Maximum worker threads (0 = OpenMP default)")->check(CLI::NonNegativeNumber);
    std::string output;
    app.add_option("-o,--output", output, "Output directory (overrides OQSIM_OUTPUT_ROOT)");

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run an experiment");
    run->add_option("config", config_path, "Config file or metadata.json")->required();

    std::vector<double> dts;
    auto* sweep = app.add_subcommand("sweep-dt", "Error against the reference for several time steps");
    sweep->add_option("config", config_path, "Config file")->required();
    sweep->add_option("--dts", dts, "Time steps to sweep")->required()->expected(1, -1);

    auto* compare = app.add_subcommand("compare", "Compare both strategies with the reference");
    compare->add_option("config", config_path, "Config file")->required();

    auto* validate = app.add_subcommand("validate", "Parse a config and print it with defaults resolved");
    validate->add_option("config", config_path, "Config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(oqsim::ErrorCategory::usage);
    }

    try {
        if (threads > 0) {
            oqsim::kernels::set_max_threads(threads);
        }
        const oqsim::ExperimentConfig cfg = oqsim::parse_config_file(config_path);

        if (*validate) {
            oqsim::check_memory(cfg);
            std::cout << cfg.to_text();
            return 0;
        }
        note_long_running(cfg);
        const auto dir = output_dir(output, cfg);

        if (*run) {
            const auto result = oqsim::run_experiment(cfg);
            oqsim::write_results(result, dir);
            std::cout << "wrote " << (dir / "results.csv").string() << '\n';
        } else if (*sweep) {
            const auto rows = oqsim::sweep_dt(cfg, dts, dir);
            std::filesystem::create_directories(dir);
            std::ofstream csv(dir / "sweep.csv", std::ios::binary);
            if (!csv) {
                throw oqsim::IoError("cannot write " + (dir / "sweep.csv").string());
            }
            oqsim::write_sweep_csv(rows, csv);
            oqsim::write_sweep_csv(rows, std::cout);
        } else if (*compare) {
            const auto cmp = oqsim::compare_methods(cfg);
            oqsim::write_results({cmp.series, {{"config_text", cfg.to_text()}, {"name", cfg.name}}}, dir);
            const auto summary = oqsim::comparison_json(cmp);
            std::ofstream js(dir / "compare.json", std::ios::binary);
            js << summary.dump(2) << '\n';
            if (!js) {
                throw oqsim::IoError("cannot write " + (dir / "compare.json").string());
            }
            for (const auto& d : cmp.deviations) {
                std::cout << d.observable << ": reconstructed max " << d.reconstructed_max << " (early "
                          << d.reconstructed_early << "), adjoint_direct max " << d.adjoint_max << " (early "
                          << d.adjoint_early << "), final gap " << d.final_gap << '\n';
            }
            std::cout << "steady-state defect at T: " << cmp.steady_state_defect.back() << '\n';
        }
    } catch (const oqsim::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(e.category());
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(oqsim::ErrorCategory::io);
    }
    return 0;
}

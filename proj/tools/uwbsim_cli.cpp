// SPDX-License-Identifier: Apache-2.0
//
// uwbsim  impulse-radio UWB link-level simulation library
// Copyright (C) 2026 the uwbsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "uwbsim/run_config.hpp"
#include "uwbsim/runner.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"uwbsim - batch experiment runner for TR/AR link-level simulations"};

    std::string config_path;
    std::string output_dir = ".";
    int workers = 0;
    unsigned long long seed_override = 0;
    bool seed_set = false;
    bool validate_only = false;

    app.add_option("--config", config_path, "experiment config file (INI key = value)")
        ->required()
        ->check(CLI::ExistingFile);
    app.add_option("--output", output_dir, "output directory for CSV artifacts");
    app.add_option("--workers", workers, "worker thread count (default: UWBSIM_WORKERS or 1)");
    app.add_option_function<unsigned long long>(
           "--seed",
           [&](unsigned long long v) {
               seed_override = v;
               seed_set = true;
           },
           "override the config seed");
    app.add_flag("--validate", validate_only, "check the config and exit");

    CLI11_PARSE(app, argc, argv);

    if (workers <= 0) {
        workers = 1;
        if (const char* env = std::getenv("UWBSIM_WORKERS")) {
            const int v = std::atoi(env);
            if (v >= 1)
                workers = v;
        }
    }

    std::vector<uwbsim::Diagnostic> diags;
    uwbsim::RunConfig cfg = uwbsim::load_run_config(config_path, diags);
    const auto semantic = uwbsim::validate(cfg);
    diags.insert(diags.end(), semantic.begin(), semantic.end());
    for (const auto& d : diags)
        std::cerr << d.str() << '\n';
    if (uwbsim::has_fatal(diags))
        return 2;
    if (validate_only)
        return 0;

    cfg.workers = workers;
    if (seed_set)
        cfg.seed = seed_override;

    try {
        const uwbsim::RunOutcome outcome = uwbsim::run_experiment(cfg, output_dir);
        for (const auto& m : outcome.messages)
            std::cout << m << '\n';
        for (const auto& f : outcome.files)
            std::cout << "wrote " << f << '\n';
        return outcome.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
}

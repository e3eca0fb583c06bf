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

#ifndef UWBSIM_RUN_CONFIG_H
#define UWBSIM_RUN_CONFIG_H

#include <cstdint>
#include <string>
#include <vector>

namespace uwbsim {

struct Diagnostic {
    bool fatal = false;
    int line = 0;  // 0 when the message is not tied to a config line
    std::string message;

    std::string str() const;
};

// Flat key-value experiment description (INI style, one experiment per
// file). Lists are comma separated; beta and sigma_xi2 lists of equal
// length are paired elementwise, single values broadcast.
struct RunConfig {
    std::string experiment;            // ber | equivalence | coupling | mi | estimation
    std::vector<std::string> schemes;  // "tr", "ar"
    std::string channel = "cm1";

    int chips = 200;                  // N
    int impulsiveness = 1;            // iota
    double chip_period_s = 1e-9;      // T_c
    double delay_spread_s = 50e-9;    // T_d
    double symbol_energy = 1.0;       // E

    std::vector<double> beta;         // K/N, or derived from `K`
    std::vector<long> users;          // K, alternative to beta
    std::vector<double> sigma_xi2;
    bool training_budget = false;     // A_t, N_t supplied instead of sigma_xi2
    double training_amplitude = 1.0;  // A_t
    int training_mseq_order = 8;      // N_t = 2^order - 1

    std::vector<double> snr_db;
    long trials = 100000;
    std::uint64_t seed = 1;
    int workers = 1;

    long coupling_samples = 100000;   // mi / coupling experiments
    long self_samples = 10000;
    std::string mi_mode = "asymptotic";  // | "finite"
    int mseq_order = 8;                  // estimation experiment

    double bandwidth_hz() const { return impulsiveness / chip_period_s; }
    int channel_chips() const;  // L = floor(T_d W / iota)

    // Full resolved key-value text, reproducing this configuration.
    std::string resolved_text() const;
};

// Parses the INI text; syntax and unknown-key problems are reported with
// their line numbers. On fatal parse errors the returned config is partial.
RunConfig parse_run_config(const std::string& text, std::vector<Diagnostic>& diags);
RunConfig load_run_config(const std::string& path, std::vector<Diagnostic>& diags);

// Semantic validation; returns every violation, fatal and advisory.
std::vector<Diagnostic> validate(const RunConfig& config);

bool has_fatal(const std::vector<Diagnostic>& diags);

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

} // namespace uwbsim

#endif

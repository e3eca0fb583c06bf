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

#ifndef UWBSIM_MONTECARLO_H
#define UWBSIM_MONTECARLO_H

#include <cstdint>
#include <vector>

#include "uwbsim/channel.hpp"
#include "uwbsim/signal.hpp"
#include "uwbsim/stats.hpp"
#include "uwbsim/transceiver.hpp"

namespace uwbsim {

// How each trial obtains the channel estimate: an additive error drawn at
// the configured per-tap variance, or an actual downlink training pass run
// at the experiment's noise level (error variance sigma_N^2 / (A_t^2 N_t)).
struct CsiMode {
    enum class Kind { Direct, Training };
    Kind kind = Kind::Direct;
    double training_amplitude = 1.0;  // A_t
    int mseq_order = 8;               // N_t = 2^m - 1
};

struct BerExperiment {
    SystemConfig config;          // noise_var is overwritten per SNR point
    SvParams sv = channel_preset("cm1");
    double delay_spread_s = 50e-9;
    std::vector<double> snr_db;   // E / sigma_N^2 grid
    Scheme scheme = Scheme::AllRake;
    long max_trials = 100000;
    long target_errors = 100;     // early stop: <= 10% relative std error
    std::uint64_t seed = 1;
    int workers = 1;
    CsiMode csi;
    bool redraw_channels = true;  // fixed-channel debugging mode when false
};

struct SnrPointResult {
    double snr_db = 0.0;
    double pe = 0.0;
    double std_err = 0.0;
    long trials = 0;
    long errors = 0;
};

struct BerResult {
    std::vector<SnrPointResult> points;
};

// Ergodic symbol-error-probability sweep: every trial redraws channels,
// hops, offsets, CSI errors, symbols and noise. Deterministic in
// (experiment, seed) for any worker count.
BerResult run_ber(const BerExperiment& exp);

struct EquivalenceOptions {
    bool normalized_prefilter = true;  // false: negative control, must fail
    double ks_alpha = 0.01;
};

struct EquivalenceReport {
    double pe_tr = 0.0, pe_ar = 0.0;
    double se_tr = 0.0, se_ar = 0.0;
    KsResult ks{};
    long trials = 0;
    bool pe_match = false;  // |pe_tr - pe_ar| <= 3 combined std errors
    bool ks_pass = false;   // KS p-value above alpha
    bool passed = false;
};

// Paired single-user TR vs AR comparison: both schemes see the same channel,
// estimation error and symbol per trial; noise is drawn independently.
EquivalenceReport equivalence_test(const BerExperiment& exp, double snr_db,
                                   const EquivalenceOptions& opts = {});

struct Histogram {
    double lo = -1.0;
    double bin_width = 0.005;
    std::vector<double> density;  // normalized to unit mass over [-1, 1]
};

struct CouplingStats {
    std::vector<double> cross_nonzero;  // conditional on overlap
    std::vector<double> self;
    long zero_draws = 0;
    long total_draws = 0;
    double zero_mass = 0.0;
    double var_nonzero = 0.0;
    double kurt_nonzero = 0.0;
    double atom_mass = 0.0;  // nonzero mass at the effective-channel peak value
    Histogram cross_hist;
    Histogram self_hist;
};

// Empirical coupling-coefficient ensemble: independent user pairs with fresh
// channels, errors, hops and offsets per draw, accumulated until `samples`
// nonzero cross couplings are seen.
CouplingStats coupling_histogram(const SystemConfig& config, Scheme scheme,
                                 double csi_error_var, long samples, std::uint64_t seed,
                                 const SvParams& sv = channel_preset("cm1"),
                                 double delay_spread_s = 50e-9);

} // namespace uwbsim

#endif

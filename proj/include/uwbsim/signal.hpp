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

#ifndef UWBSIM_SIGNAL_H
#define UWBSIM_SIGNAL_H

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "uwbsim/channel.hpp"
#include "uwbsim/rng.hpp"

namespace uwbsim {

// Scalar system parameters. The sample rate is the bandwidth W; a chip lasts
// iota samples (T_c = iota/W) and a symbol N chips. The channel spans L chips
// (L*iota + 1 taps). noise_var is the two-sided N0/2 level seen by any
// unit-norm projection of the received signal.
struct SystemConfig {
    int chips_per_symbol = 0;   // N
    int users = 1;              // K
    int impulsiveness = 1;      // iota >= 1
    double bandwidth_hz = 1e9;  // W
    int channel_chips = 0;      // L = floor(T_d W / iota)
    double symbol_energy = 1.0; // E, antipodal symbols are +/- sqrt(E)
    double noise_var = 0.0;     // sigma_N^2
    double csi_error_var = 0.0; // sigma_xi^2 per tap

    double chip_period_s() const { return impulsiveness / bandwidth_hz; }
    int samples_per_symbol() const { return chips_per_symbol * impulsiveness; }
    int channel_samples() const { return channel_chips * impulsiveness; } // L*iota
    int channel_taps() const { return channel_samples() + 1; }
    double load() const { return static_cast<double>(users) / chips_per_symbol; }

    // Throws on violated invariants; returns human-readable warnings
    // (e.g. N < 2L) that do not prevent a run.
    std::vector<std::string> validate() const;
};

// Time-hopping spreading vector: a single active sample per symbol at
// position (hop-1)*iota + offset out of N*iota (1-based, per the usual
// s (x) e_l Kronecker construction).
struct SpreadingVector {
    int hop = 1;     // nu in 1..N
    int offset = 1;  // l in 1..iota, sub-chip asynchronism
    int chips = 1;   // N
    int impulsiveness = 1;

    // 0-based index of the active sample within the symbol frame
    int sample_index() const { return (hop - 1) * impulsiveness + (offset - 1); }
};

// Uniform hop and sub-chip offset
SpreadingVector make_th_code(int chips, int impulsiveness, Rng& rng);

// Full linear convolution, |a|+|b|-1 samples
std::vector<double> convolve(std::span<const double> a, std::span<const double> b);

// Additive white Gaussian per-tap estimation error; the result is not
// renormalized (the estimate leaves the unit-energy sphere).
DiscreteChannel perturb_channel(const DiscreteChannel& c, double error_var, Rng& rng);

// Time-reversal prefilter for an estimated channel: reversed taps scaled to
// unit norm, so prefiltered and plain transmissions carry the same energy.
std::vector<double> tr_prefilter(const DiscreteChannel& estimate);

// Nonzero window of the received-signal template of one user: the channel
// itself (All-Rake) or prefilter*channel (time reversal), starting at the
// code's active sample.
struct EffectiveChannel {
    std::vector<double> samples;
    int window_start = 0;  // absolute 0-based sample index of samples[0]
};

EffectiveChannel effective_channel(const DiscreteChannel& c,
                                   const std::vector<double>* prefilter,
                                   const SpreadingVector& code);

} // namespace uwbsim

#endif

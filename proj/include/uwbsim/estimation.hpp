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

#ifndef UWBSIM_ESTIMATION_H
#define UWBSIM_ESTIMATION_H

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "uwbsim/channel.hpp"
#include "uwbsim/rng.hpp"
#include "uwbsim/signal.hpp"

namespace uwbsim {

// Antipodal PN training sequence. chips holds +/-amplitude values; the
// transmitted (upsampled) form places each chip on the first of its
// impulsiveness samples.
struct TrainingSequence {
    std::vector<double> chips;
    double amplitude = 1.0;
    int impulsiveness = 1;

    int length() const { return static_cast<int>(chips.size()); }       // N_t
    double energy() const;                                              // A_t^2 N_t
    std::vector<double> samples() const;                                // upsilon
};

// Maximal-length sequence from an m-bit LFSR (primitive feedback taps),
// length 2^m - 1. Periodic autocorrelation is exactly
// ||phi||^2 (delta_i0 - 1/N_t). seed_state selects the phase (any nonzero
// register fill). Supported orders: 2..20.
TrainingSequence gen_mseq(int order, std::uint32_t seed_state, double amplitude = 1.0,
                          int impulsiveness = 1);

TrainingSequence cyclic_shift(const TrainingSequence& seq, int shift);

// (xi, zeta) parameterization of the joint linear estimators
// W^T = (xi Y^T Y + zeta I)^{-1} Y^T.
struct EstimatorKind {
    double xi_reg = 1.0;
    double zeta_reg = 0.0;

    static EstimatorKind zf() { return {1.0, 0.0}; }
    static EstimatorKind mmse(double noise_var) { return {1.0, noise_var}; }
    static EstimatorKind rzf(double z) { return {1.0, z}; }
    static EstimatorKind mf() { return {0.0, 1.0}; }
};

// "zf" | "rzf" | "mmse" | "mf"; mmse picks up config.noise_var, rzf uses
// the supplied regularizer.
EstimatorKind estimator_from_name(std::string_view name, const SystemConfig& config,
                                  double rzf_regularizer = 1e-3);

struct DlEstimate {
    DiscreteChannel channel;
    double error_var;  // reported per-tap variance sigma_N^2 / ||upsilon||^2
};

// Downlink matched-filter estimation from one smeared training observation
// of length (N_t + L) * iota.
DlEstimate dl_estimate(std::span<const double> received, const TrainingSequence& training,
                       const SystemConfig& config);

// Uplink joint estimation of all K channels from the superposition of the
// users' training sequences. Throws "training rank-deficient" for an
// unsolvable ZF system.
std::vector<DiscreteChannel> ul_estimate(std::span<const double> received,
                                         std::span<const TrainingSequence> trainings,
                                         const EstimatorKind& kind,
                                         const SystemConfig& config);

// Fig.-style four-phase frame accounting, all durations in samples.
struct FrameSchedule {
    long dl_training = 0;
    long dl_guard = 0;
    long ul_training = 0;
    long ul_guard = 0;
    long data = 0;
    long postamble = 0;
    double data_fraction = 0.0;  // data / (UL-occupied samples)
};

FrameSchedule frame_budget(long n_t_dl, long n_t_ul, long n_data, int channel_chips,
                           int impulsiveness);

// Test/experiment helpers: propagate a training transmission through a
// channel and add receiver noise.
std::vector<double> simulate_dl_training(const DiscreteChannel& c,
                                         const TrainingSequence& training, double noise_var,
                                         Rng& rng);
std::vector<double> simulate_ul_training(std::span<const DiscreteChannel> channels,
                                         std::span<const TrainingSequence> trainings,
                                         double noise_var, Rng& rng);

} // namespace uwbsim

#endif

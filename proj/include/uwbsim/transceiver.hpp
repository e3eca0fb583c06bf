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

#ifndef UWBSIM_TRANSCEIVER_H
#define UWBSIM_TRANSCEIVER_H

#include <span>
#include <string_view>
#include <vector>

#include "uwbsim/channel.hpp"
#include "uwbsim/rng.hpp"
#include "uwbsim/signal.hpp"

namespace uwbsim {

// The two transceiver structures under comparison: no prefilter with an
// All-Rake receiver, or time-reversal prefilter with a 1Rake receiver
// synchronized to the effective-channel peak.
enum class Scheme { AllRake, TimeReversal };

Scheme scheme_from_name(std::string_view name);  // "ar" | "tr"
std::string_view scheme_name(Scheme s);

// One realization of the coupling coefficients a_kk, {a_kj} that parameterize
// the decision statistic z_k = a_kk b_k + sum_j a_kj b_j + noise.
struct CouplingSample {
    double self = 0.0;
    std::vector<double> cross;
    Scheme scheme = Scheme::AllRake;
};

struct DecisionVariable {
    double value = 0.0;
    double signal = 0.0;        // a_kk b_k
    double interference = 0.0;  // sum_{j != k} a_kj b_j
    double noise = 0.0;
};

// All-Rake useful-signal gain under imperfect CSI: the receiver projects onto
// the estimated direction, a_kk = (c+xi)^T c / ||c+xi||.
double ar_self_coupling(const DiscreteChannel& c, std::span<const double> error);

// Time-reversal useful-signal gain: the 1Rake picks the effective-channel
// peak, a_kk = c^T (c + xi_reversed) / ||c + xi_reversed||.
double tr_self_coupling(const DiscreteChannel& c, std::span<const double> error);

// Coupling of interferer j onto receiver k. For time reversal `error`
// perturbs the interferer's prefilter; for All-Rake it perturbs the
// receiver's combining template. Exactly zero when the effective windows
// do not reach user k's sampling position.
double cross_coupling(Scheme scheme, const DiscreteChannel& c_k, const DiscreteChannel& c_j,
                      std::span<const double> error, const SpreadingVector& code_k,
                      const SpreadingVector& code_j);

// Decision statistic for user 0 given all users' channels, estimation errors
// (empty span = perfect CSI for that user), codes and symbols. The reported
// components sum to the value exactly.
DecisionVariable decision_variable(Scheme scheme, const SystemConfig& config,
                                   std::span<const double> symbols,
                                   std::span<const DiscreteChannel> channels,
                                   std::span<const std::vector<double>> errors,
                                   std::span<const SpreadingVector> codes, Rng& noise_rng);

// Probability that two users' effective windows overlap. The analytic form
// (2(L+1)iota - 1) / (N iota) neglects border effects; the exact companion
// enumerates all hop/offset pairs of the sample-level model.
double overlap_probability(int chips, int channel_chips, int impulsiveness);
double overlap_probability_exact(int chips, int channel_chips, int impulsiveness);

} // namespace uwbsim

#endif

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

#ifndef UWBSIM_CHANNEL_H
#define UWBSIM_CHANNEL_H

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string_view>
#include <vector>

namespace uwbsim {

// Saleh-Valenzuela cluster/ray parameters (IEEE 802.15.3a style).
// Rates are in 1/ns, decay constants in ns, fading standard deviations in dB.
struct SvParams {
    double cluster_rate;       // Lambda, cluster arrival rate [1/ns]
    double ray_rate;           // lambda, ray arrival rate within a cluster [1/ns]
    double cluster_decay;      // Gamma, cluster power decay constant [ns]
    double ray_decay;          // gamma, ray power decay constant [ns]
    double cluster_fading_db;  // sigma_1, per-cluster lognormal fading std [dB]
    double ray_fading_db;      // sigma_2, per-ray lognormal fading std [dB]

    void validate() const;  // throws std::invalid_argument
};

// Named presets; "cm1" is the 0-4 m line-of-sight parameterization.
const SvParams& channel_preset(std::string_view name);

struct PathComponent {
    double delay_ns;    // >= 0, non-decreasing within a channel
    double amplitude;   // real, signed
};

// Continuous-time multipath realization (path delays and amplitudes).
struct ContinuousChannel {
    std::vector<PathComponent> paths;
};

// Tapped-delay-line channel at sample spacing 1/W.
struct DiscreteChannel {
    std::vector<double> taps;
    double tap_spacing_s;

    double energy() const;  // sum of squared taps
};

// Draw one cluster/ray realization: Poisson cluster arrivals, Poisson ray
// arrivals within each cluster, exponential mean-power decay across both,
// lognormal amplitude fading and an equiprobable sign per ray.
// Deterministic in (params, seed, max_delay_ns). Generation stops at
// max_delay_ns; callers that truncate at a known delay spread can skip the
// paths they would drop anyway.
ContinuousChannel sample_sv_channel(const SvParams& params, std::uint64_t seed,
                                    double max_delay_ns =
                                        std::numeric_limits<double>::infinity());

// RMS delay spread of one realization [ns] (amplitude-squared weighting).
double rms_delay_spread_ns(const ContinuousChannel& ch);

// Bin path amplitudes at resolution 1/W into floor(T_d W) + 1 full-width
// taps; paths beyond the last bin are dropped. Throws if no path survives.
DiscreteChannel discretize(const ContinuousChannel& ch, double bandwidth_hz,
                           double delay_spread_s, int impulsiveness);

// Scale to unit energy; throws on an all-zero input.
DiscreteChannel normalize_energy(const DiscreteChannel& ch);

// Full linear autocorrelation, lags -(n-1)..(n-1) for n taps. The center
// entry equals the tap energy and the sequence is exactly symmetric.
std::vector<double> autocorrelation(const DiscreteChannel& ch);

// CSV rows "index,value", one tap per line.
void write_csv(const DiscreteChannel& ch, std::ostream& out);

} // namespace uwbsim

#endif

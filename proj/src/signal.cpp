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

#include "uwbsim/signal.hpp"

#include <cmath>
#include <stdexcept>

namespace uwbsim {

std::vector<std::string> SystemConfig::validate() const
{
    if (chips_per_symbol < 1)
        throw std::invalid_argument("SystemConfig: N must be >= 1");
    if (users < 1)
        throw std::invalid_argument("SystemConfig: K must be >= 1");
    if (impulsiveness < 1)
        throw std::invalid_argument("SystemConfig: impulsiveness index must be >= 1");
    if (!(bandwidth_hz > 0.0))
        throw std::invalid_argument("SystemConfig: bandwidth must be positive");
    if (channel_chips < 0)
        throw std::invalid_argument("SystemConfig: L must be >= 0");
    if (noise_var < 0.0 || csi_error_var < 0.0)
        throw std::invalid_argument("SystemConfig: variances must be >= 0");
    if (!(symbol_energy >= 0.0))
        throw std::invalid_argument("SystemConfig: symbol energy must be >= 0");

    std::vector<std::string> warnings;
    if (chips_per_symbol < 2 * channel_chips)
        warnings.push_back("N < 2L: inter-user overlap statistics deviate from the "
                           "sparse-regime model");
    return warnings;
}

SpreadingVector make_th_code(int chips, int impulsiveness, Rng& rng)
{
    if (chips < 1 || impulsiveness < 1)
        throw std::invalid_argument("make_th_code: N and iota must be >= 1");
    SpreadingVector code;
    code.chips = chips;
    code.impulsiveness = impulsiveness;
    code.hop = rng.uniform_int(1, chips);
    code.offset = rng.uniform_int(1, impulsiveness);
    return code;
}

std::vector<double> convolve(std::span<const double> a, std::span<const double> b)
{
    if (a.empty() || b.empty())
        throw std::invalid_argument("convolve: empty input");
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double ai = a[i];
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i + j] += ai * b[j];
    }
    return out;
}

DiscreteChannel perturb_channel(const DiscreteChannel& c, double error_var, Rng& rng)
{
    if (error_var < 0.0)
        throw std::invalid_argument("perturb_channel: variance must be >= 0");
    DiscreteChannel out = c;
    if (error_var > 0.0) {
        const double sd = std::sqrt(error_var);
        for (double& t : out.taps)
            t += sd * rng.normal();
    }
    return out;
}

std::vector<double> tr_prefilter(const DiscreteChannel& estimate)
{
    const double e = estimate.energy();
    if (e <= 0.0)
        throw std::invalid_argument("tr_prefilter: zero-energy channel estimate");
    const double inv = 1.0 / std::sqrt(e);
    std::vector<double> t(estimate.taps.rbegin(), estimate.taps.rend());
    for (double& v : t)
        v *= inv;
    return t;
}

EffectiveChannel effective_channel(const DiscreteChannel& c,
                                   const std::vector<double>* prefilter,
                                   const SpreadingVector& code)
{
    EffectiveChannel h;
    h.window_start = code.sample_index();
    if (prefilter == nullptr)
        h.samples = c.taps;
    else
        h.samples = convolve(c.taps, *prefilter);
    return h;
}

} // namespace uwbsim

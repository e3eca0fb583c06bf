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

#include "uwbsim/channel.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "uwbsim/rng.hpp"

namespace uwbsim {

namespace {

// Stop generating clusters/rays once the mean power has decayed below this
// fraction of the leading path; CM1-class decay constants put the resulting
// horizon well past the delay spreads used in the experiments.
constexpr double kPowerFloor = 1e-5;

} // namespace

void SvParams::validate() const
{
    if (!(cluster_rate > 0.0) || !(ray_rate > 0.0) || !(cluster_decay > 0.0) ||
        !(ray_decay > 0.0) || !(cluster_fading_db > 0.0) || !(ray_fading_db > 0.0))
        throw std::invalid_argument("SvParams: all fields must be strictly positive");
}

const SvParams& channel_preset(std::string_view name)
{
    // CM1 (LOS, 0-4 m): Lambda = 0.0233/ns, lambda = 2.5/ns, Gamma = 7.1 ns,
    // gamma = 4.3 ns, sigma_1 = sigma_2 = 3.3941 dB. Shadowing is omitted;
    // unit-energy normalization removes it anyway.
    static const SvParams cm1{0.0233, 2.5, 7.1, 4.3, 3.3941, 3.3941};
    if (name == "cm1")
        return cm1;
    throw std::invalid_argument("unknown channel preset: " + std::string(name));
}

double DiscreteChannel::energy() const
{
    double e = 0.0;
    for (double t : taps)
        e += t * t;
    return e;
}

ContinuousChannel sample_sv_channel(const SvParams& params, std::uint64_t seed,
                                    double max_delay_ns)
{
    params.validate();
    if (!(max_delay_ns > 0.0))
        throw std::invalid_argument("sample_sv_channel: max delay must be positive");
    Rng rng(seed);

    // Combined cluster+ray lognormal fading: 20 log10(amp) Gaussian with
    // variance sigma_1^2 + sigma_2^2, mean chosen so that E[amp^2] equals the
    // double-exponential mean power exp(-T/Gamma - tau/gamma).
    const double sigma_ln = std::sqrt(params.cluster_fading_db * params.cluster_fading_db +
                                      params.ray_fading_db * params.ray_fading_db) *
                            std::log(10.0) / 20.0;

    const double cluster_horizon =
        std::min(-params.cluster_decay * std::log(kPowerFloor), max_delay_ns);
    const double ray_horizon = -params.ray_decay * std::log(kPowerFloor);

    ContinuousChannel ch;
    double t_cluster = 0.0;  // first cluster arrives at zero
    while (t_cluster <= cluster_horizon) {
        const double ray_stop = std::min(ray_horizon, max_delay_ns - t_cluster);
        double tau = 0.0;  // first ray coincides with the cluster arrival
        while (tau <= ray_stop) {
            const double log_mean_power =
                -t_cluster / params.cluster_decay - tau / params.ray_decay;
            const double mu_ln = 0.5 * log_mean_power - sigma_ln * sigma_ln;
            const double amp = rng.sign() * std::exp(mu_ln + sigma_ln * rng.normal());
            ch.paths.push_back({t_cluster + tau, amp});
            tau += rng.exponential(params.ray_rate);
        }
        t_cluster += rng.exponential(params.cluster_rate);
    }

    std::sort(ch.paths.begin(), ch.paths.end(),
              [](const PathComponent& a, const PathComponent& b) { return a.delay_ns < b.delay_ns; });
    return ch;
}

double rms_delay_spread_ns(const ContinuousChannel& ch)
{
    if (ch.paths.empty())
        throw std::invalid_argument("rms_delay_spread_ns: empty channel");
    double p = 0.0, m1 = 0.0, m2 = 0.0;
    for (const auto& path : ch.paths) {
        const double w = path.amplitude * path.amplitude;
        p += w;
        m1 += w * path.delay_ns;
        m2 += w * path.delay_ns * path.delay_ns;
    }
    m1 /= p;
    m2 /= p;
    return std::sqrt(std::max(0.0, m2 - m1 * m1));
}

DiscreteChannel discretize(const ContinuousChannel& ch, double bandwidth_hz,
                           double delay_spread_s, int impulsiveness)
{
    if (!(bandwidth_hz > 0.0))
        throw std::invalid_argument("discretize: bandwidth must be positive");
    if (!(delay_spread_s > 0.0))
        throw std::invalid_argument("discretize: delay spread must be positive");
    if (impulsiveness < 1)
        throw std::invalid_argument("discretize: impulsiveness index must be >= 1");

    // the +1e-9 nudge keeps integral T_d W products (e.g. 10 ns at 2 GHz)
    // from flooring down through binary rounding
    const std::size_t n_taps =
        static_cast<std::size_t>(std::floor(delay_spread_s * bandwidth_hz + 1e-9)) + 1;
    DiscreteChannel out;
    out.taps.assign(n_taps, 0.0);
    out.tap_spacing_s = 1.0 / bandwidth_hz;

    // Truncation happens on the bin grid: every retained tap covers a full
    // 1/W bin, so the modeled channel genuinely occupies L iota + 1 samples.
    bool kept = false;
    for (const auto& path : ch.paths) {
        const double delay_s = path.delay_ns * 1e-9;
        const auto bin =
            static_cast<std::size_t>(std::floor(delay_s * bandwidth_hz + 1e-9));
        if (bin >= n_taps)
            continue;  // beyond the modeled delay spread
        out.taps[bin] += path.amplitude;
        kept = true;
    }
    if (!kept)
        throw std::invalid_argument("discretize: empty channel after truncation");
    return out;
}

DiscreteChannel normalize_energy(const DiscreteChannel& ch)
{
    const double e = ch.energy();
    if (e <= 0.0)
        throw std::invalid_argument("normalize_energy: zero-energy channel");
    DiscreteChannel out = ch;
    const double inv = 1.0 / std::sqrt(e);
    for (double& t : out.taps)
        t *= inv;
    return out;
}

std::vector<double> autocorrelation(const DiscreteChannel& ch)
{
    const std::size_t n = ch.taps.size();
    if (n == 0)
        throw std::invalid_argument("autocorrelation: empty channel");
    std::vector<double> acf(2 * n - 1, 0.0);
    for (std::size_t m = 0; m < n; ++m) {
        double s = 0.0;
        for (std::size_t i = 0; i + m < n; ++i)
            s += ch.taps[i] * ch.taps[i + m];
        acf[n - 1 + m] = s;
        acf[n - 1 - m] = s;  // gamma[-m] = gamma[m]
    }
    return acf;
}

void write_csv(const DiscreteChannel& ch, std::ostream& out)
{
    out << "index,value\n";
    for (std::size_t i = 0; i < ch.taps.size(); ++i)
        out << i << ',' << ch.taps[i] << '\n';
}

} // namespace uwbsim

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

#include "uwbsim/transceiver.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace uwbsim {

namespace {

// sum_i a[i] * b[i + shift] over the valid index range; zero when the ranges
// do not intersect.
double shifted_dot(std::span<const double> a, std::span<const double> b, long shift)
{
    const long lo = std::max(0L, -shift);
    const long hi = std::min(static_cast<long>(a.size()),
                             static_cast<long>(b.size()) - shift);
    double s = 0.0;
    for (long i = lo; i < hi; ++i)
        s += a[i] * b[i + shift];
    return s;
}

// channel estimate c + xi; an empty error span means perfect CSI
std::vector<double> estimated_taps(const DiscreteChannel& c, std::span<const double> error)
{
    if (!error.empty() && error.size() != c.taps.size())
        throw std::invalid_argument("coupling: error vector length must match channel taps");
    std::vector<double> est(c.taps.begin(), c.taps.end());
    for (std::size_t i = 0; i < error.size(); ++i)
        est[i] += error[i];
    return est;
}

double norm(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v)
        s += x * x;
    return std::sqrt(s);
}

} // namespace

Scheme scheme_from_name(std::string_view name)
{
    if (name == "ar")
        return Scheme::AllRake;
    if (name == "tr")
        return Scheme::TimeReversal;
    throw std::invalid_argument("unknown scheme: " + std::string(name));
}

std::string_view scheme_name(Scheme s)
{
    return s == Scheme::AllRake ? "ar" : "tr";
}

double ar_self_coupling(const DiscreteChannel& c, std::span<const double> error)
{
    const std::vector<double> est = estimated_taps(c, error);
    const double n = norm(est);
    if (n <= 0.0)
        throw std::invalid_argument("ar_self_coupling: zero estimated channel");
    return shifted_dot(est, c.taps, 0) / n;
}

double tr_self_coupling(const DiscreteChannel& c, std::span<const double> error)
{
    std::vector<double> est(c.taps.begin(), c.taps.end());
    if (!error.empty()) {
        if (error.size() != c.taps.size())
            throw std::invalid_argument("tr_self_coupling: error vector length must match taps");
        // the prefilter carries the reversed error pattern
        for (std::size_t i = 0; i < est.size(); ++i)
            est[i] += error[error.size() - 1 - i];
    }
    const double n = norm(est);
    if (n <= 0.0)
        throw std::invalid_argument("tr_self_coupling: zero estimated channel");
    return shifted_dot(c.taps, est, 0) / n;
}

double cross_coupling(Scheme scheme, const DiscreteChannel& c_k, const DiscreteChannel& c_j,
                      std::span<const double> error, const SpreadingVector& code_k,
                      const SpreadingVector& code_j)
{
    const long span_k = static_cast<long>(c_k.taps.size()) - 1;  // L*iota
    const long span_j = static_cast<long>(c_j.taps.size()) - 1;

    if (scheme == Scheme::TimeReversal) {
        // 1Rake of user k sits at q_k = L*iota + j_k; pick that sample of the
        // interferer's effective channel conv(c_j, reverse(c_j + xi)/||.||).
        const std::vector<double> est = estimated_taps(c_j, error);
        const double n = norm(est);
        if (n <= 0.0)
            throw std::invalid_argument("cross_coupling: zero estimated channel");
        const long pos = span_k + code_k.sample_index() - code_j.sample_index();
        if (pos < 0 || pos > 2 * span_j)
            return 0.0;
        return shifted_dot(c_j.taps, est, span_j - pos) / n;
    }

    // All-Rake: project interferer j's true template onto user k's perturbed
    // combining direction at their relative code delay.
    const std::vector<double> est = estimated_taps(c_k, error);
    const double n = norm(est);
    if (n <= 0.0)
        throw std::invalid_argument("cross_coupling: zero estimated channel");
    const long delta = code_j.sample_index() - code_k.sample_index();
    return shifted_dot(c_j.taps, est, delta) / n;
}

DecisionVariable decision_variable(Scheme scheme, const SystemConfig& config,
                                   std::span<const double> symbols,
                                   std::span<const DiscreteChannel> channels,
                                   std::span<const std::vector<double>> errors,
                                   std::span<const SpreadingVector> codes, Rng& noise_rng)
{
    const std::size_t k_users = static_cast<std::size_t>(config.users);
    if (symbols.size() != k_users || channels.size() != k_users ||
        errors.size() != k_users || codes.size() != k_users)
        throw std::invalid_argument("decision_variable: per-user inputs must have K entries");

    DecisionVariable d;
    const double self = scheme == Scheme::TimeReversal
                            ? tr_self_coupling(channels[0], errors[0])
                            : ar_self_coupling(channels[0], errors[0]);
    d.signal = self * symbols[0];
    for (std::size_t j = 1; j < k_users; ++j) {
        const std::span<const double> err =
            scheme == Scheme::TimeReversal ? std::span<const double>(errors[j])
                                           : std::span<const double>(errors[0]);
        d.interference +=
            cross_coupling(scheme, channels[0], channels[j], err, codes[0], codes[j]) *
            symbols[j];
    }
    d.noise = config.noise_var > 0.0 ? noise_rng.normal(0.0, std::sqrt(config.noise_var)) : 0.0;
    d.value = d.signal + d.interference + d.noise;
    return d;
}

double overlap_probability(int chips, int channel_chips, int impulsiveness)
{
    if (chips < 1)
        throw std::invalid_argument("overlap_probability: N must be >= 1");
    const double window = 2.0 * (channel_chips + 1) * impulsiveness - 1.0;
    return std::min(1.0, window / (static_cast<double>(chips) * impulsiveness));
}

double overlap_probability_exact(int chips, int channel_chips, int impulsiveness)
{
    if (chips < 1 || impulsiveness < 1 || channel_chips < 0)
        throw std::invalid_argument("overlap_probability_exact: invalid parameters");
    const long m = static_cast<long>(chips) * impulsiveness;
    const long reach = static_cast<long>(channel_chips) * impulsiveness;
    long hits = 0;
    for (long a = 0; a < m; ++a)
        for (long b = 0; b < m; ++b)
            hits += std::labs(a - b) <= reach ? 1 : 0;
    return static_cast<double>(hits) / (static_cast<double>(m) * static_cast<double>(m));
}

} // namespace uwbsim

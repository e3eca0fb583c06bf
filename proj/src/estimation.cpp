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

#include "uwbsim/estimation.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

namespace uwbsim {

namespace {

// Primitive polynomials x^m + sum x^e + 1 over GF(2), stored as the exponent
// sets below m (0 included). The Fibonacci recurrence
// s[t+m] = xor of s[t+e] realizes them; the unit tests verify the full
// period and the two-valued periodic autocorrelation for every order.
const std::vector<int>& lfsr_feedback_exponents(int order)
{
    static const std::vector<std::vector<int>> table = {
        /* 2*/ {1, 0},        /* 3*/ {1, 0},         /* 4*/ {1, 0},
        /* 5*/ {2, 0},        /* 6*/ {1, 0},         /* 7*/ {3, 0},
        /* 8*/ {4, 3, 2, 0},  /* 9*/ {4, 0},         /*10*/ {3, 0},
        /*11*/ {2, 0},        /*12*/ {6, 4, 1, 0},   /*13*/ {4, 3, 1, 0},
        /*14*/ {10, 6, 1, 0}, /*15*/ {1, 0},         /*16*/ {12, 3, 1, 0},
        /*17*/ {3, 0},        /*18*/ {7, 0},         /*19*/ {5, 2, 1, 0},
        /*20*/ {3, 0},
    };
    if (order < 2 || order > 20)
        throw std::invalid_argument("gen_mseq: supported register lengths are 2..20");
    return table[order - 2];
}

} // namespace

double TrainingSequence::energy() const
{
    double e = 0.0;
    for (double c : chips)
        e += c * c;
    return e;
}

std::vector<double> TrainingSequence::samples() const
{
    std::vector<double> up(chips.size() * static_cast<std::size_t>(impulsiveness), 0.0);
    for (std::size_t i = 0; i < chips.size(); ++i)
        up[i * impulsiveness] = chips[i];
    return up;
}

TrainingSequence gen_mseq(int order, std::uint32_t seed_state, double amplitude,
                          int impulsiveness)
{
    if (!(amplitude > 0.0))
        throw std::invalid_argument("gen_mseq: amplitude must be positive");
    if (impulsiveness < 1)
        throw std::invalid_argument("gen_mseq: impulsiveness index must be >= 1");

    const auto& exps = lfsr_feedback_exponents(order);
    const std::uint32_t mask = (1u << order) - 1u;
    std::uint32_t state = seed_state & mask;
    if (state == 0)
        state = 1;  // the all-zero state is absorbing

    const int n = (1 << order) - 1;
    TrainingSequence seq;
    seq.amplitude = amplitude;
    seq.impulsiveness = impulsiveness;
    seq.chips.resize(n);
    for (int i = 0; i < n; ++i) {
        seq.chips[i] = (state & 1u) ? amplitude : -amplitude;
        std::uint32_t fb = 0;
        for (int e : exps)
            fb ^= (state >> e) & 1u;
        state = (state >> 1) | (fb << (order - 1));
    }
    return seq;
}

TrainingSequence cyclic_shift(const TrainingSequence& seq, int shift)
{
    const int n = seq.length();
    TrainingSequence out = seq;
    for (int i = 0; i < n; ++i)
        out.chips[i] = seq.chips[((i + shift) % n + n) % n];
    return out;
}

EstimatorKind estimator_from_name(std::string_view name, const SystemConfig& config,
                                  double rzf_regularizer)
{
    if (name == "zf")
        return EstimatorKind::zf();
    if (name == "mmse")
        return EstimatorKind::mmse(config.noise_var);
    if (name == "rzf")
        return EstimatorKind::rzf(rzf_regularizer);
    if (name == "mf")
        return EstimatorKind::mf();
    throw std::invalid_argument("unknown estimator kind: " + std::string(name));
}

DlEstimate dl_estimate(std::span<const double> received, const TrainingSequence& training,
                       const SystemConfig& config)
{
    const std::vector<double> up = training.samples();
    const std::size_t taps = static_cast<std::size_t>(config.channel_taps());
    if (received.size() != up.size() + taps - 1)
        throw std::invalid_argument("dl_estimate: received length must be (N_t + L) * iota");

    const double up_energy = training.energy();  // ||upsilon||^2 = A_t^2 N_t
    DlEstimate est;
    est.channel.tap_spacing_s = 1.0 / config.bandwidth_hz;
    est.channel.taps.resize(taps);
    // matched filter: correlate the observation with the training sequence at
    // each candidate tap lag (Y^T y), then remove the training gain
    for (std::size_t l = 0; l < taps; ++l) {
        double s = 0.0;
        for (std::size_t t = 0; t < up.size(); ++t)
            s += up[t] * received[t + l];
        est.channel.taps[l] = s / up_energy;
    }
    est.error_var = config.noise_var / up_energy;
    return est;
}

std::vector<DiscreteChannel> ul_estimate(std::span<const double> received,
                                         std::span<const TrainingSequence> trainings,
                                         const EstimatorKind& kind,
                                         const SystemConfig& config)
{
    const int k_users = static_cast<int>(trainings.size());
    if (k_users < 1)
        throw std::invalid_argument("ul_estimate: need at least one training sequence");
    const int taps = config.channel_taps();

    const std::size_t up_len = trainings[0].samples().size();
    for (const auto& t : trainings)
        if (t.samples().size() != up_len)
            throw std::invalid_argument("ul_estimate: training sequences must share a length");
    const std::size_t rows = up_len + static_cast<std::size_t>(taps) - 1;
    if (received.size() != rows)
        throw std::invalid_argument("ul_estimate: received length must be (N_t + L) * iota");

    const long n_t_samples = static_cast<long>(up_len);
    if (kind.xi_reg != 0.0 && kind.zeta_reg == 0.0 &&
        n_t_samples < static_cast<long>(k_users) * (taps - 1))
        throw std::invalid_argument(
            "ul_estimate: training rank-deficient (N_t iota < K L iota); use rzf");

    // Stacked Toeplitz training matrix Y = [Y_1 ... Y_K], column (k, l) is
    // user k's upsampled sequence delayed by l samples.
    const int cols = k_users * taps;
    Eigen::MatrixXd y_mat = Eigen::MatrixXd::Zero(static_cast<long>(rows), cols);
    for (int k = 0; k < k_users; ++k) {
        const std::vector<double> up = trainings[k].samples();
        for (int l = 0; l < taps; ++l)
            for (std::size_t t = 0; t < up.size(); ++t)
                y_mat(static_cast<long>(t) + l, k * taps + l) = up[t];
    }

    const Eigen::Map<const Eigen::VectorXd> y(received.data(), static_cast<long>(received.size()));
    const Eigen::VectorXd rhs = y_mat.transpose() * y;

    Eigen::VectorXd z;
    if (kind.xi_reg == 0.0) {
        // matched filter; remove the per-user training gain so the output is
        // on the channel scale, like the downlink estimator
        z = rhs / kind.zeta_reg;
        for (int k = 0; k < k_users; ++k)
            z.segment(k * taps, taps) /= trainings[k].energy();
    } else {
        Eigen::MatrixXd normal = kind.xi_reg * (y_mat.transpose() * y_mat);
        normal.diagonal().array() += kind.zeta_reg;
        const Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
        z = ldlt.solve(rhs);
        const double resid = (normal * z - rhs).norm();
        if (!(resid <= 1e-6 * (1.0 + rhs.norm())))
            throw std::invalid_argument("ul_estimate: training rank-deficient; use rzf");
    }

    std::vector<DiscreteChannel> out(static_cast<std::size_t>(k_users));
    for (int k = 0; k < k_users; ++k) {
        out[k].tap_spacing_s = 1.0 / config.bandwidth_hz;
        out[k].taps.assign(z.data() + k * taps, z.data() + (k + 1) * taps);
    }
    return out;
}

FrameSchedule frame_budget(long n_t_dl, long n_t_ul, long n_data, int channel_chips,
                           int impulsiveness)
{
    if (n_t_dl < 0 || n_t_ul < 0 || n_data < 0 || channel_chips < 0 || impulsiveness < 1)
        throw std::invalid_argument("frame_budget: arguments must be nonnegative");
    const long guard = static_cast<long>(channel_chips) * impulsiveness;
    FrameSchedule f;
    f.dl_training = n_t_dl * impulsiveness;
    f.dl_guard = guard;
    f.ul_training = n_t_ul * impulsiveness;
    f.ul_guard = guard;
    f.data = n_data * impulsiveness;
    f.postamble = guard;
    const long ul_occupied = f.ul_training + f.ul_guard + f.data + f.postamble;
    f.data_fraction = ul_occupied > 0 ? static_cast<double>(f.data) / ul_occupied : 1.0;
    return f;
}

std::vector<double> simulate_dl_training(const DiscreteChannel& c,
                                         const TrainingSequence& training, double noise_var,
                                         Rng& rng)
{
    std::vector<double> rx = convolve(training.samples(), c.taps);
    if (noise_var > 0.0) {
        const double sd = std::sqrt(noise_var);
        for (double& v : rx)
            v += sd * rng.normal();
    }
    return rx;
}

std::vector<double> simulate_ul_training(std::span<const DiscreteChannel> channels,
                                         std::span<const TrainingSequence> trainings,
                                         double noise_var, Rng& rng)
{
    if (channels.size() != trainings.size() || channels.empty())
        throw std::invalid_argument("simulate_ul_training: one training per channel required");
    std::vector<double> rx;
    for (std::size_t k = 0; k < channels.size(); ++k) {
        const std::vector<double> part = convolve(trainings[k].samples(), channels[k].taps);
        if (rx.empty())
            rx.assign(part.size(), 0.0);
        if (part.size() != rx.size())
            throw std::invalid_argument("simulate_ul_training: mismatched lengths");
        for (std::size_t i = 0; i < part.size(); ++i)
            rx[i] += part[i];
    }
    if (noise_var > 0.0) {
        const double sd = std::sqrt(noise_var);
        for (double& v : rx)
            v += sd * rng.normal();
    }
    return rx;
}

} // namespace uwbsim

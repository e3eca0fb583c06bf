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

#include <catch2/catch_amalgamated.hpp>

#include "uwbsim/channel.hpp"
#include "uwbsim/signal.hpp"

using namespace uwbsim;

TEST_CASE("system config validation")
{
    SystemConfig cfg;
    cfg.chips_per_symbol = 200;
    cfg.channel_chips = 50;
    REQUIRE(cfg.validate().empty());
    REQUIRE(cfg.chip_period_s() == Catch::Approx(1e-9));
    REQUIRE(cfg.samples_per_symbol() == 200);
    REQUIRE(cfg.channel_taps() == 51);

    cfg.chips_per_symbol = 60;
    REQUIRE(cfg.validate().size() == 1);  // N < 2L warning

    cfg.impulsiveness = 0;
    REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("time-hopping code degenerate cases")
{
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const SpreadingVector c = make_th_code(8, 1, rng);
        REQUIRE(c.offset == 1);  // iota = 1 leaves no sub-chip freedom
        REQUIRE(c.hop >= 1);
        REQUIRE(c.hop <= 8);
    }
    const SpreadingVector c = make_th_code(1, 1, rng);
    REQUIRE(c.sample_index() == 0);
}

TEST_CASE("time-hopping code is uniform (chi-square at 1%)")
{
    Rng rng(21);
    const int n_chips = 16, draws = 100000;
    std::vector<long> hop_count(n_chips, 0);
    std::vector<long> offset_count(4, 0);
    for (int i = 0; i < draws; ++i) {
        const SpreadingVector c = make_th_code(n_chips, 4, rng);
        ++hop_count[c.hop - 1];
        ++offset_count[c.offset - 1];
    }
    const double expected_hop = static_cast<double>(draws) / n_chips;
    double chi2_hop = 0.0;
    for (long c : hop_count)
        chi2_hop += (c - expected_hop) * (c - expected_hop) / expected_hop;
    REQUIRE(chi2_hop < 30.5779);  // chi2_{0.99, 15}

    const double expected_off = static_cast<double>(draws) / 4;
    double chi2_off = 0.0;
    for (long c : offset_count)
        chi2_off += (c - expected_off) * (c - expected_off) / expected_off;
    REQUIRE(chi2_off < 11.3449);  // chi2_{0.99, 3}
}

TEST_CASE("convolution identity, hand case and shift invariance")
{
    const std::vector<double> b = {2.0, -1.0, 0.5};
    REQUIRE(convolve(std::vector<double>{1.0}, b) == b);

    const std::vector<double> prod = convolve(std::vector<double>{1.0, 1.0},
                                              std::vector<double>{1.0, -1.0});
    REQUIRE(prod == std::vector<double>{1.0, 0.0, -1.0});

    Rng rng(2);
    std::vector<double> a(13);
    for (double& v : a)
        v = rng.normal();
    double ea = 0.0;
    for (double v : a)
        ea += v * v;
    for (int j = 0; j < 5; ++j) {
        std::vector<double> impulse(j + 1, 0.0);
        impulse[j] = 1.0;
        const std::vector<double> shifted = convolve(a, impulse);
        double es = 0.0;
        for (double v : shifted)
            es += v * v;
        REQUIRE(es == Catch::Approx(ea).margin(1e-12));
    }
    REQUIRE_THROWS_AS(convolve({}, b), std::invalid_argument);
}

TEST_CASE("perturb_channel is exact at zero variance and calibrated otherwise")
{
    DiscreteChannel c;
    c.tap_spacing_s = 1e-9;
    c.taps.assign(100000, 0.0);

    Rng rng(4);
    const DiscreteChannel same = perturb_channel(c, 0.0, rng);
    REQUIRE(same.taps == c.taps);

    // moment oracle over 1e5 taps
    const double var = 0.04;
    Rng rng2(4);
    const DiscreteChannel noisy = perturb_channel(c, var, rng2);
    double s = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < c.taps.size(); ++i) {
        const double d = noisy.taps[i] - c.taps[i];
        s += d;
        s2 += d * d;
    }
    const double m = s / c.taps.size();
    const double v = s2 / c.taps.size() - m * m;
    REQUIRE(v == Catch::Approx(var).epsilon(0.03));
}

TEST_CASE("perturbation is unbiased: E[chat . c] = |c|^2")
{
    DiscreteChannel c;
    c.tap_spacing_s = 1e-9;
    c.taps.assign(51, 0.0);
    Rng init(8);
    for (double& t : c.taps)
        t = init.normal();
    c = normalize_energy(c);

    const int trials = 20000;
    double acc = 0.0, acc2 = 0.0;
    for (int i = 0; i < trials; ++i) {
        Rng rng = Rng::substream(99, i);
        const DiscreteChannel est = perturb_channel(c, 0.05, rng);
        double dot = 0.0;
        for (std::size_t k = 0; k < c.taps.size(); ++k)
            dot += est.taps[k] * c.taps[k];
        acc += dot;
        acc2 += dot * dot;
    }
    const double m = acc / trials;
    const double se = std::sqrt((acc2 / trials - m * m) / trials);
    REQUIRE(std::abs(m - 1.0) <= 3.0 * se);
}

TEST_CASE("tr prefilter reverses and normalizes")
{
    DiscreteChannel c;
    c.tap_spacing_s = 1e-9;

    c.taps = {1.0};
    REQUIRE(tr_prefilter(c) == std::vector<double>{1.0});

    c.taps = {0.6, 0.8};
    const std::vector<double> t1 = tr_prefilter(c);
    REQUIRE(t1[0] == Catch::Approx(0.8).margin(1e-15));
    REQUIRE(t1[1] == Catch::Approx(0.6).margin(1e-15));

    c.taps = {3.0, 4.0};
    const std::vector<double> t2 = tr_prefilter(c);
    REQUIRE(t2[0] == Catch::Approx(0.8).margin(1e-15));
    REQUIRE(t2[1] == Catch::Approx(0.6).margin(1e-15));

    c.taps = {0.0};
    REQUIRE_THROWS_AS(tr_prefilter(c), std::invalid_argument);
}

TEST_CASE("prefilter norm is one for any perturbed estimate")
{
    Rng rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        DiscreteChannel c;
        c.tap_spacing_s = 1e-9;
        c.taps.resize(21);
        for (double& t : c.taps)
            t = rng.normal();
        const std::vector<double> t = tr_prefilter(perturb_channel(c, 0.02, rng));
        double e = 0.0;
        for (double v : t)
            e += v * v;
        REQUIRE(e == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("effective channel windows")
{
    const SvParams& cm1 = channel_preset("cm1");
    const DiscreteChannel c =
        normalize_energy(discretize(sample_sv_channel(cm1, 404), 1e9, 50e-9, 1));
    SpreadingVector code{3, 1, 32, 1};

    SECTION("all-rake: the channel at the code position")
    {
        const EffectiveChannel h = effective_channel(c, nullptr, code);
        REQUIRE(h.window_start == code.sample_index());
        REQUIRE(h.samples == c.taps);
        REQUIRE(h.samples.size() == 51u);  // L iota + 1
    }

    SECTION("time reversal: matched-filter peak of one at the rake delay")
    {
        const std::vector<double> t = tr_prefilter(c);
        const EffectiveChannel h = effective_channel(c, &t, code);
        REQUIRE(h.samples.size() == 101u);  // 2 L iota + 1
        const int peak = 50;                // q - window_start = L iota
        REQUIRE(h.samples[peak] == Catch::Approx(1.0).margin(1e-12));

        // with perfect CSI the window is the channel autocorrelation
        const std::vector<double> acf = autocorrelation(c);
        for (std::size_t i = 0; i < acf.size(); ++i)
            REQUIRE(h.samples[i] == Catch::Approx(acf[i]).margin(1e-12));
    }

    SECTION("delta channel spreads to a single sample")
    {
        DiscreteChannel delta;
        delta.tap_spacing_s = 1e-9;
        delta.taps = {1.0};
        const EffectiveChannel h = effective_channel(delta, nullptr, code);
        REQUIRE(h.samples == std::vector<double>{1.0});
        REQUIRE(h.window_start == 2);
    }
}

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
#include <sstream>

#include "uwbsim/channel.hpp"
#include "uwbsim/rng.hpp"

using namespace uwbsim;

TEST_CASE("cm1 preset carries the published parameter set")
{
    const SvParams& cm1 = channel_preset("cm1");
    REQUIRE(cm1.cluster_rate == 0.0233);
    REQUIRE(cm1.ray_rate == 2.5);
    REQUIRE(cm1.cluster_decay == 7.1);
    REQUIRE(cm1.ray_decay == 4.3);
    REQUIRE(cm1.cluster_fading_db == 3.3941);
    REQUIRE(cm1.ray_fading_db == 3.3941);
    REQUIRE_THROWS_AS(channel_preset("cm9"), std::invalid_argument);

    SvParams bad = cm1;
    bad.ray_decay = 0.0;
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("sv sampling is deterministic and never empty")
{
    const SvParams& cm1 = channel_preset("cm1");
    const ContinuousChannel a = sample_sv_channel(cm1, 1234);
    const ContinuousChannel b = sample_sv_channel(cm1, 1234);
    REQUIRE(a.paths.size() == b.paths.size());
    REQUIRE(!a.paths.empty());
    for (std::size_t i = 0; i < a.paths.size(); ++i) {
        REQUIRE(a.paths[i].delay_ns == b.paths[i].delay_ns);
        REQUIRE(a.paths[i].amplitude == b.paths[i].amplitude);
    }
    // delays sorted and nonnegative
    double last = 0.0;
    for (const auto& p : a.paths) {
        REQUIRE(p.delay_ns >= last);
        last = p.delay_ns;
    }
}

TEST_CASE("cm1 ensemble hits the published RMS delay spread")
{
    // Monte-Carlo oracle: the CM1 parameterization targets ~5 ns
    const SvParams& cm1 = channel_preset("cm1");
    const int n = 10000;
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
        acc += rms_delay_spread_ns(sample_sv_channel(cm1, 100000 + i));
    const double mean_spread = acc / n;
    REQUIRE(mean_spread > 4.0);
    REQUIRE(mean_spread < 6.0);
}

TEST_CASE("discretize places a delta channel in bin zero")
{
    ContinuousChannel ch;
    ch.paths = {{0.0, 1.0}};
    const DiscreteChannel d = discretize(ch, 1e9, 50e-9, 1);
    REQUIRE(d.taps.size() == 51);
    REQUIRE(d.taps[0] == 1.0);
    for (std::size_t i = 1; i < d.taps.size(); ++i)
        REQUIRE(d.taps[i] == 0.0);
    REQUIRE(d.tap_spacing_s == 1e-9);
}

TEST_CASE("discretize bin-sums amplitudes sharing a bin")
{
    // hand-binning oracle: 0.2 ns and 0.7 ns both fall in bin 0 at 1 GHz
    ContinuousChannel ch;
    ch.paths = {{0.2, 0.6}, {0.7, 0.8}};
    const DiscreteChannel d = discretize(ch, 1e9, 50e-9, 1);
    REQUIRE(d.taps[0] == Catch::Approx(1.4).margin(1e-15));
}

TEST_CASE("discretize truncates on the bin grid")
{
    // 51 full-width bins at 1 GHz: 50.5 ns still lands in bin 50, 51.2 ns
    // falls past the modeled spread and is dropped
    ContinuousChannel ch;
    ch.paths = {{0.0, 1.0}, {50.5, 0.25}, {51.2, 5.0}};
    const DiscreteChannel d = discretize(ch, 1e9, 50e-9, 1);
    REQUIRE(d.taps[50] == 0.25);
    double total = 0.0;
    for (double t : d.taps)
        total += t;
    REQUIRE(total == 1.25);

    ContinuousChannel late;
    late.paths = {{60.0, 1.0}};
    REQUIRE_THROWS_WITH(discretize(late, 1e9, 50e-9, 1),
                        Catch::Matchers::ContainsSubstring("empty channel"));
}

TEST_CASE("discretization conserves retained amplitude mass")
{
    const SvParams& cm1 = channel_preset("cm1");
    for (int seed = 0; seed < 20; ++seed) {
        const ContinuousChannel ch = sample_sv_channel(cm1, 5000 + seed);
        const DiscreteChannel d = discretize(ch, 1e9, 50e-9, 1);
        double retained = 0.0;
        for (const auto& p : ch.paths)
            if (std::floor(p.delay_ns * 1e-9 * 1e9 + 1e-9) < 51.0)
                retained += p.amplitude;
        double binned = 0.0;
        for (double t : d.taps)
            binned += t;
        REQUIRE(binned == Catch::Approx(retained).margin(1e-12));
    }
}

TEST_CASE("normalize_energy scales to the unit sphere")
{
    DiscreteChannel c;
    c.tap_spacing_s = 1e-9;
    c.taps = {3.0, 4.0};
    const DiscreteChannel n = normalize_energy(c);
    REQUIRE(n.taps[0] == Catch::Approx(0.6).margin(1e-15));
    REQUIRE(n.taps[1] == Catch::Approx(0.8).margin(1e-15));

    // idempotence
    const DiscreteChannel n2 = normalize_energy(n);
    REQUIRE(n2.taps[0] == Catch::Approx(n.taps[0]).margin(1e-15));

    DiscreteChannel zero;
    zero.taps = {0.0, 0.0};
    zero.tap_spacing_s = 1e-9;
    REQUIRE_THROWS_AS(normalize_energy(zero), std::invalid_argument);
}

TEST_CASE("normalize_energy matches an independent norm computation")
{
    Rng rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        DiscreteChannel c;
        c.tap_spacing_s = 1e-9;
        c.taps.resize(31);
        double norm2 = 0.0;
        for (double& t : c.taps) {
            t = rng.normal();
            norm2 += t * t;
        }
        const double norm = std::sqrt(norm2);
        const DiscreteChannel n = normalize_energy(c);
        for (std::size_t i = 0; i < c.taps.size(); ++i)
            REQUIRE(n.taps[i] == Catch::Approx(c.taps[i] / norm).margin(1e-14));
        REQUIRE(n.energy() == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("autocorrelation hand cases and symmetry")
{
    DiscreteChannel one;
    one.taps = {1.0};
    one.tap_spacing_s = 1e-9;
    REQUIRE(autocorrelation(one) == std::vector<double>{1.0});

    DiscreteChannel c;
    c.taps = {0.6, 0.8};
    c.tap_spacing_s = 1e-9;
    const std::vector<double> acf = autocorrelation(c);
    REQUIRE(acf.size() == 3);
    REQUIRE(acf[0] == Catch::Approx(0.48).margin(1e-15));
    REQUIRE(acf[1] == Catch::Approx(1.0).margin(1e-15));
    REQUIRE(acf[2] == Catch::Approx(0.48).margin(1e-15));

    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        DiscreteChannel r;
        r.tap_spacing_s = 1e-9;
        r.taps.resize(17);
        for (double& t : r.taps)
            t = rng.normal();
        const std::vector<double> g = autocorrelation(r);
        const std::size_t mid = g.size() / 2;
        REQUIRE(g[mid] == Catch::Approx(r.energy()).margin(1e-12));
        for (std::size_t m = 0; m < g.size(); ++m) {
            REQUIRE(g[m] == g[g.size() - 1 - m]);  // exact symmetry
            REQUIRE(std::abs(g[m]) <= g[mid] + 1e-12);
        }
    }
}

TEST_CASE("channel csv export emits one row per tap")
{
    DiscreteChannel c;
    c.taps = {1.0, -0.5};
    c.tap_spacing_s = 1e-9;
    std::ostringstream os;
    write_csv(c, os);
    REQUIRE(os.str() == "index,value\n0,1\n1,-0.5\n");
}

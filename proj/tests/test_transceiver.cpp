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
#include "uwbsim/stats.hpp"
#include "uwbsim/transceiver.hpp"

using namespace uwbsim;

namespace {

DiscreteChannel random_unit_channel(std::uint64_t seed, int taps = 51)
{
    DiscreteChannel c;
    c.tap_spacing_s = 1e-9;
    c.taps.resize(taps);
    Rng rng(seed);
    for (double& t : c.taps)
        t = rng.normal();
    return normalize_energy(c);
}

DiscreteChannel cm1_channel(std::uint64_t seed)
{
    return normalize_energy(
        discretize(sample_sv_channel(channel_preset("cm1"), seed), 1e9, 50e-9, 1));
}

} // namespace

TEST_CASE("scheme names round-trip")
{
    REQUIRE(scheme_from_name("ar") == Scheme::AllRake);
    REQUIRE(scheme_from_name("tr") == Scheme::TimeReversal);
    REQUIRE(scheme_name(Scheme::TimeReversal) == "tr");
    REQUIRE_THROWS_AS(scheme_from_name("xx"), std::invalid_argument);
}

TEST_CASE("all-rake self coupling")
{
    const DiscreteChannel c = random_unit_channel(17);

    SECTION("perfect CSI gives the channel norm")
    {
        REQUIRE(ar_self_coupling(c, {}) == Catch::Approx(1.0).margin(1e-12));
    }

    SECTION("collinear perturbation preserves the direction")
    {
        std::vector<double> xi(c.taps.size());
        for (std::size_t i = 0; i < xi.size(); ++i)
            xi[i] = -0.5 * c.taps[i];
        REQUIRE(ar_self_coupling(c, xi) == Catch::Approx(1.0).margin(1e-12));
    }

    SECTION("matches the direct formula on random draws")
    {
        Rng rng(5);
        for (int trial = 0; trial < 30; ++trial) {
            std::vector<double> xi(c.taps.size());
            for (double& v : xi)
                v = 0.2 * rng.normal();
            double dot = 0.0, n2 = 0.0;
            for (std::size_t i = 0; i < xi.size(); ++i) {
                const double est = c.taps[i] + xi[i];
                dot += est * c.taps[i];
                n2 += est * est;
            }
            REQUIRE(ar_self_coupling(c, xi) ==
                    Catch::Approx(dot / std::sqrt(n2)).margin(1e-13));
        }
    }

    SECTION("zero estimate throws")
    {
        DiscreteChannel one;
        one.tap_spacing_s = 1e-9;
        one.taps = {1.0};
        const std::vector<double> xi = {-1.0};
        REQUIRE_THROWS_AS(ar_self_coupling(one, xi), std::invalid_argument);
    }
}

TEST_CASE("time-reversal self coupling")
{
    SECTION("perfect CSI gives one")
    {
        const DiscreteChannel c = cm1_channel(9);
        REQUIRE(tr_self_coupling(c, {}) == Catch::Approx(1.0).margin(1e-12));
    }

    SECTION("single-tap direct formula")
    {
        DiscreteChannel c;
        c.tap_spacing_s = 1e-9;
        c.taps = {1.0};
        const std::vector<double> xi = {0.1};
        // c^T (c + xi_reversed) / ||c + xi_reversed|| = 1.1 / 1.1
        REQUIRE(tr_self_coupling(c, xi) == Catch::Approx(1.0).margin(1e-14));
    }

    SECTION("two-tap direct formula")
    {
        DiscreteChannel c;
        c.tap_spacing_s = 1e-9;
        c.taps = {0.6, 0.8};
        const std::vector<double> xi = {0.1, -0.05};
        // reversed error: estimate = (0.6 - 0.05, 0.8 + 0.1)
        const double dot = 0.6 * 0.55 + 0.8 * 0.9;
        const double n = std::sqrt(0.55 * 0.55 + 0.9 * 0.9);
        REQUIRE(tr_self_coupling(c, xi) == Catch::Approx(dot / n).margin(1e-14));
    }

    SECTION("distribution matches the all-rake self coupling (KS at 1%)")
    {
        const long n = 100000;
        std::vector<double> tr(n), ar(n);
        for (long i = 0; i < n; ++i) {
            Rng rng = Rng::substream(606, i);
            const DiscreteChannel c = random_unit_channel(rng.next_u64(), 31);
            std::vector<double> xi(c.taps.size());
            for (double& v : xi)
                v = 0.1 * rng.normal();
            tr[i] = tr_self_coupling(c, xi);
            // fresh error for an independent draw of the same law
            for (double& v : xi)
                v = 0.1 * rng.normal();
            ar[i] = ar_self_coupling(c, xi);
        }
        REQUIRE(ks_two_sample(tr, ar).p_value > 0.01);
    }
}

TEST_CASE("cross coupling support and atoms")
{
    const DiscreteChannel c_k = cm1_channel(31);
    const DiscreteChannel c_j = cm1_channel(32);
    const int n_chips = 128;

    SECTION("non-overlapping windows give exactly zero")
    {
        const SpreadingVector k{1, 1, n_chips, 1};
        const SpreadingVector j{80, 1, n_chips, 1};  // 79 samples apart > L iota = 50
        REQUIRE(cross_coupling(Scheme::TimeReversal, c_k, c_j, {}, k, j) == 0.0);
        REQUIRE(cross_coupling(Scheme::AllRake, c_k, c_j, {}, k, j) == 0.0);
    }

    SECTION("tr coupling at the interferer peak equals the channel norm")
    {
        const SpreadingVector k{7, 1, n_chips, 1};
        const SpreadingVector j{7, 1, n_chips, 1};  // q_k aligned with j's peak
        REQUIRE(cross_coupling(Scheme::TimeReversal, c_k, c_j, {}, k, j) ==
                Catch::Approx(1.0).margin(1e-12));
    }

    SECTION("ar coupling of aligned single-tap channels is one")
    {
        DiscreteChannel tap;
        tap.tap_spacing_s = 1e-9;
        tap.taps = {1.0};
        const SpreadingVector k{5, 1, n_chips, 1};
        const SpreadingVector j{5, 1, n_chips, 1};
        REQUIRE(cross_coupling(Scheme::AllRake, tap, tap, {}, k, j) == 1.0);
    }

    SECTION("tr coupling off the peak picks the autocorrelation sample")
    {
        const SpreadingVector k{10, 1, n_chips, 1};
        const SpreadingVector j{13, 1, n_chips, 1};  // j starts 3 samples later
        const std::vector<double> acf = autocorrelation(c_j);
        // relative window position L iota + (j_k - j_j) = 50 - 3 = 47
        REQUIRE(cross_coupling(Scheme::TimeReversal, c_k, c_j, {}, k, j) ==
                Catch::Approx(acf[47]).margin(1e-12));
    }

    SECTION("ar coupling matches the direct shifted inner product")
    {
        const SpreadingVector k{10, 1, n_chips, 1};
        const SpreadingVector j{12, 1, n_chips, 1};  // delta = +2
        double dot = 0.0;
        for (std::size_t i = 2; i < c_k.taps.size(); ++i)
            dot += c_k.taps[i] * c_j.taps[i - 2];
        REQUIRE(cross_coupling(Scheme::AllRake, c_k, c_j, {}, k, j) ==
                Catch::Approx(dot).margin(1e-12));
    }
}

TEST_CASE("decision variable composition")
{
    SystemConfig cfg;
    cfg.chips_per_symbol = 64;
    cfg.users = 1;
    cfg.channel_chips = 50;
    cfg.symbol_energy = 4.0;
    cfg.noise_var = 0.0;

    const std::vector<DiscreteChannel> chans = {cm1_channel(77)};
    const std::vector<std::vector<double>> errs = {{}};
    const std::vector<SpreadingVector> codes = {{9, 1, 64, 1}};
    Rng rng(1);

    SECTION("noiseless single user recovers sqrt(E) exactly")
    {
        const std::vector<double> b = {2.0};
        const DecisionVariable z =
            decision_variable(Scheme::TimeReversal, cfg, b, chans, errs, codes, rng);
        REQUIRE(z.value == Catch::Approx(2.0).margin(1e-12));
        REQUIRE(z.interference == 0.0);
        REQUIRE(z.noise == 0.0);
    }

    SECTION("components always sum to the value")
    {
        SystemConfig multi = cfg;
        multi.users = 3;
        multi.noise_var = 0.5;
        multi.csi_error_var = 0.01;
        std::vector<DiscreteChannel> cs = {cm1_channel(1), cm1_channel(2), cm1_channel(3)};
        std::vector<SpreadingVector> xs;
        std::vector<std::vector<double>> es;
        Rng draw(55);
        for (int u = 0; u < 3; ++u) {
            xs.push_back(make_th_code(multi.chips_per_symbol, 1, draw));
            std::vector<double> xi(cs[u].taps.size());
            for (double& v : xi)
                v = 0.1 * draw.normal();
            es.push_back(xi);
        }
        const std::vector<double> b = {2.0, -2.0, 2.0};
        for (int trial = 0; trial < 20; ++trial) {
            const DecisionVariable z =
                decision_variable(Scheme::AllRake, multi, b, cs, es, xs, draw);
            REQUIRE(z.value == z.signal + z.interference + z.noise);
        }
    }

    SECTION("noise-only variance is calibrated (moment oracle)")
    {
        SystemConfig noisy = cfg;
        noisy.noise_var = 0.25;
        const std::vector<double> b = {0.0};
        const int n = 100000;
        std::vector<double> zs(n);
        Rng noise_rng(13);
        for (int i = 0; i < n; ++i)
            zs[i] = decision_variable(Scheme::AllRake, noisy, b, chans, errs, codes,
                                      noise_rng)
                        .value;
        REQUIRE(variance(zs) == Catch::Approx(0.25).epsilon(0.03));
    }
}

TEST_CASE("overlap probability analytic form and exact enumerator")
{
    REQUIRE(overlap_probability(4, 1, 1) == Catch::Approx(0.75).margin(1e-15));
    REQUIRE(overlap_probability(16, 0, 1) == Catch::Approx(1.0 / 16).margin(1e-15));

    // exact single-sample collision probability for L = 0
    REQUIRE(overlap_probability_exact(16, 0, 1) == Catch::Approx(1.0 / 16).margin(1e-15));

    // the analytic approximation carries an O(L/N) border term
    for (const auto& [n, l, iota] : std::vector<std::tuple<int, int, int>>{
             {8, 2, 1}, {8, 2, 2}, {16, 3, 2}}) {
        const double approx = overlap_probability(n, l, iota);
        const double exact = overlap_probability_exact(n, l, iota);
        REQUIRE(std::abs(approx - exact) <=
                static_cast<double>(l + 1) / static_cast<double>(n));
    }

    // exact enumerator against the closed-form pair count
    const double m = 16.0, reach = 4.0;  // N iota = 16, L iota = 4
    const double hits = m * (2.0 * reach + 1.0) - reach * (reach + 1.0);
    REQUIRE(overlap_probability_exact(8, 2, 2) ==
            Catch::Approx(hits / (m * m)).margin(1e-15));
}

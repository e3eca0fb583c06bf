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

#include "uwbsim/fft.hpp"
#include "uwbsim/rng.hpp"
#include "uwbsim/stats.hpp"

using namespace uwbsim;

TEST_CASE("rng is deterministic per seed and differs across streams")
{
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) {
        const double va = a.uniform();
        REQUIRE(va == b.uniform());
        REQUIRE(va >= 0.0);
        REQUIRE(va < 1.0);
    }
    Rng s1 = Rng::substream(7, 0);
    Rng s2 = Rng::substream(7, 1);
    bool differs = false;
    for (int i = 0; i < 16; ++i)
        differs = differs || (s1.next_u64() != s2.next_u64());
    REQUIRE(differs);
}

TEST_CASE("normal sampler has standard moments")
{
    Rng rng(1);
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        s += x;
        s2 += x * x;
    }
    const double m = s / n;
    const double v = s2 / n - m * m;
    REQUIRE(std::abs(m) < 4.0 / std::sqrt(static_cast<double>(n)));
    REQUIRE(v == Catch::Approx(1.0).margin(0.02));
}

TEST_CASE("moment helpers on hand-computed values")
{
    const std::vector<double> x = {1.0, 1.0, -1.0, -1.0};
    REQUIRE(mean(x) == 0.0);
    REQUIRE(variance(x) == 1.0);
    REQUIRE(kurtosis(x) == 1.0);  // two-point symmetric law
    REQUIRE(rms(x) == 1.0);
}

TEST_CASE("q function reference points")
{
    REQUIRE(q_function(0.0) == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(q_function(1.6448536269514722) == Catch::Approx(0.05).margin(1e-6));
    REQUIRE(q_function(3.0902323061678132) == Catch::Approx(0.001).margin(1e-7));
}

TEST_CASE("kolmogorov survival matches classic critical values")
{
    // lambda at the 5% and 1% two-sided KS levels
    REQUIRE(kolmogorov_survival(1.3581) == Catch::Approx(0.05).margin(1e-3));
    REQUIRE(kolmogorov_survival(1.6276) == Catch::Approx(0.01).margin(5e-4));
    REQUIRE(kolmogorov_survival(0.0) == 1.0);
}

TEST_CASE("two-sample KS accepts equal laws and rejects different ones")
{
    Rng rng(5);
    std::vector<double> a(20000), b(20000), c(20000);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = rng.normal();
        b[i] = rng.normal();
        c[i] = rng.normal() + 0.2;
    }
    REQUIRE(ks_two_sample(a, b).p_value > 0.01);
    REQUIRE(ks_two_sample(a, c).p_value < 1e-6);
}

TEST_CASE("fft matches a direct DFT and inverts")
{
    Rng rng(9);
    const std::size_t n = 64;
    std::vector<std::complex<double>> x(n);
    for (auto& v : x)
        v = {rng.normal(), rng.normal()};

    std::vector<std::complex<double>> ref(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t t = 0; t < n; ++t) {
            const double ang = -2.0 * M_PI * static_cast<double>(k * t) / n;
            acc += x[t] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        ref[k] = acc;
    }

    std::vector<std::complex<double>> y = x;
    fft(y);
    for (std::size_t k = 0; k < n; ++k)
        REQUIRE(std::abs(y[k] - ref[k]) < 1e-9);

    fft(y, true);
    for (std::size_t k = 0; k < n; ++k)
        REQUIRE(std::abs(y[k] - x[k]) < 1e-12);

    std::vector<std::complex<double>> bad(12);
    REQUIRE_THROWS_AS(fft(bad), std::invalid_argument);
}

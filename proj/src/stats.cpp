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

#include "uwbsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uwbsim {

double mean(std::span<const double> x)
{
    if (x.empty())
        throw std::invalid_argument("mean: empty input");
    double s = 0.0;
    for (double v : x)
        s += v;
    return s / static_cast<double>(x.size());
}

double variance(std::span<const double> x)
{
    const double m = mean(x);
    double s = 0.0;
    for (double v : x)
        s += (v - m) * (v - m);
    return s / static_cast<double>(x.size());
}

double kurtosis(std::span<const double> x)
{
    const double m = mean(x);
    double m2 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d2 = (v - m) * (v - m);
        m2 += d2;
        m4 += d2 * d2;
    }
    m2 /= static_cast<double>(x.size());
    m4 /= static_cast<double>(x.size());
    if (m2 <= 0.0)
        throw std::invalid_argument("kurtosis: zero variance");
    return m4 / (m2 * m2);
}

double rms(std::span<const double> x)
{
    double s = 0.0;
    for (double v : x)
        s += v * v;
    return std::sqrt(s / static_cast<double>(x.size()));
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double kolmogorov_survival(double lambda)
{
    if (lambda <= 0.0)
        return 1.0;
    // 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2), converges fast for lambda > 0.3
    double s = 0.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        s += (j % 2 == 1) ? term : -term;
        if (term < 1e-16)
            break;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b)
{
    if (a.empty() || b.empty())
        throw std::invalid_argument("ks_two_sample: empty sample");
    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());

    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < sa.size() && j < sb.size()) {
        const double x = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] <= x)
            ++i;
        while (j < sb.size() && sb[j] <= x)
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double ne = na * nb / (na + nb);
    return {d, kolmogorov_survival(std::sqrt(ne) * d)};
}

double binomial_stderr(double p_hat, std::size_t trials)
{
    if (trials == 0)
        throw std::invalid_argument("binomial_stderr: zero trials");
    return std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(trials));
}

} // namespace uwbsim

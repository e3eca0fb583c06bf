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

#ifndef UWBSIM_STATS_H
#define UWBSIM_STATS_H

#include <cstddef>
#include <span>
#include <vector>

namespace uwbsim {

double mean(std::span<const double> x);
double variance(std::span<const double> x);       // population (divide by n)
double kurtosis(std::span<const double> x);       // mu4 / mu2^2, non-excess
double rms(std::span<const double> x);

// Gaussian tail probability Q(x) = P(N(0,1) > x)
double q_function(double x);

// Complement of the Kolmogorov distribution, P(K > lambda)
double kolmogorov_survival(double lambda);

struct KsResult {
    double statistic;  // sup |F1 - F2|
    double p_value;    // asymptotic two-sample p-value
};

// Two-sample Kolmogorov-Smirnov test; inputs need not be sorted.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

// Standard error of a binomial proportion estimate
double binomial_stderr(double p_hat, std::size_t trials);

} // namespace uwbsim

#endif

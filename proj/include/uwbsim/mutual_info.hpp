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

#ifndef UWBSIM_MUTUAL_INFO_H
#define UWBSIM_MUTUAL_INFO_H

#include <complex>
#include <span>
#include <vector>

namespace uwbsim {

// Weighted point mass underlying an empirical characteristic function.
// Carrying the (binned) sample atoms alongside the gridded values lets the
// pipeline evaluate expectations of the cf at arguments off the stored grid
// without interpolation.
struct CfAtom {
    double weight;
    double value;
};

// Characteristic function sampled on a uniform grid symmetric about zero
// (u_i = -u_max + i du, so u = 0 sits at index n/2).
struct GriddedCf {
    std::vector<double> u;
    std::vector<std::complex<double>> values;
    std::vector<CfAtom> atoms;  // optional provenance, empty for derived cfs

    // phi(0) = 1 within 1e-9, |phi| <= 1 + eps, Hermitian symmetry
    void validate() const;
};

struct GriddedPdf {
    std::vector<double> z;
    std::vector<double> density;
    double clipped_mass = 0.0;  // negative ripple removed before renormalizing
};

// System load: beta = K/N, and the effective load counting the mean number
// of interfering overlaps per sample in the large-system limit.
struct LoadParams {
    double beta = 0.0;
    int channel_chips = 0;  // L
    int impulsiveness = 1;  // iota

    double effective() const
    {
        return beta * (2.0 * (channel_chips + 1) * impulsiveness - 1.0) / impulsiveness;
    }
};

// Interference composition: exact finite-K product or its compound-Poisson
// large-system limit.
struct InterferenceMode {
    bool asymptotic = true;
    int users = 0;  // K, finite mode
    int chips = 0;  // N, finite mode

    static InterferenceMode limit() { return {true, 0, 0}; }
    static InterferenceMode finite(int users, int chips) { return {false, users, chips}; }
};

std::vector<double> make_u_grid(double u_max, int points);

// Empirical cf phi(u) = mean exp(i u x). Samples are binned to at most 2^14
// mean-preserving atoms, which the returned cf carries.
GriddedCf cf_of_samples(std::span<const double> samples, std::span<const double> u_grid);

// Average the cf argument over Gaussian symbols b ~ N(0, E):
// phibar(u) = E_b[phi(b u)]. With sample atoms available this is the exact
// Gaussian-mixture form sum_j w_j exp(-E a_j^2 u^2 / 2); otherwise it falls
// back to Gauss-Hermite quadrature with interpolation on the stored grid
// (adequate only while |b u| stays inside the grid).
GriddedCf symbol_average_cf(const GriddedCf& cf, double symbol_energy, int gh_nodes = 64);

// Characteristic function of the multiuser interference built from the
// symbol-averaged single-interferer cf.
GriddedCf interference_cf(const GriddedCf& phibar, const LoadParams& load,
                          const InterferenceMode& mode);

GriddedCf add_noise_cf(const GriddedCf& cf, double noise_var);

// Fourier inversion on conjugate grids (dz = 2 pi / (n du)). Requires
// |phi| < edge_tol at the grid boundary, clips negative ripple and
// renormalizes; throws if the clipped mass exceeds clip_tol.
GriddedPdf pdf_from_cf(const GriddedCf& cf, double edge_tol = 1e-8, double clip_tol = 1e-4);

// Riemann sum of -p ln p, in nats. 0 ln 0 := 0.
double differential_entropy(const GriddedPdf& p);

struct MiConfig {
    double symbol_energy = 1.0;  // E
    double noise_var = 0.0;      // sigma_N^2 (two-sided)
    LoadParams load;
    InterferenceMode mode = InterferenceMode::limit();
    int gh_nodes = 64;
    int grid_points = 1 << 16;
    double edge_tol = 1e-8;
    double min_smoothing = 1e-6;  // noise floor (times E) injected when sigma_N^2 = 0
    int workers = 1;
};

struct MiResult {
    double mi_nats = 0.0;
    double h_total = 0.0;
    double h_conditional = 0.0;
    double u_max = 0.0;
    double noise_var_used = 0.0;
    bool smoothed = false;       // true if the sigma_N^2 = 0 floor was injected
    double max_clipped_mass = 0.0;
};

// I(z; b) = h(z) - h(z | b) for Gaussian symbols through the matched-filter
// bank: the self coupling enters as samples, the nonzero cross coupling via
// its conditional cf (with atoms), the zero mass through the load.
MiResult mutual_information(std::span<const double> self_samples, const GriddedCf& cross_cf,
                            const MiConfig& cfg);

// Var of the interference term given E[a^2 | nonzero] of the cross coupling.
double interference_variance(const LoadParams& load, const InterferenceMode& mode,
                             double symbol_energy, double cross_second_moment);

// Mean over the self-coupling samples of (1/2) ln(1 + E a^2 / (var_S + var_N)):
// the mutual information when the interference-plus-noise is Gaussian.
double gaussian_lower_bound(std::span<const double> self_samples, double interference_var,
                            double noise_var, double symbol_energy);

// R = (beta / iota) I  [nats/s/Hz]; the sum rate is W R.
double spectral_efficiency(double mi_nats, double beta, int impulsiveness);

} // namespace uwbsim

#endif

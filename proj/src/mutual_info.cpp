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

#include "uwbsim/mutual_info.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "uwbsim/fft.hpp"
#include "uwbsim/stats.hpp"
#include "uwbsim/transceiver.hpp"

namespace uwbsim {

namespace {

constexpr int kMaxAtoms = 1 << 14;

// Gauss-Hermite rule for weight exp(-x^2) via the Golub-Welsch eigenproblem.
struct GhRule {
    std::vector<double> nodes;
    std::vector<double> weights;  // already divided by sqrt(pi): sum = 1
};

GhRule gauss_hermite(int n)
{
    if (n < 1 || n > 256)
        throw std::invalid_argument("gauss_hermite: order out of range");
    GhRule rule;
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = std::sqrt(k / 2.0);
        jac(k, k - 1) = b;
        jac(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = es.eigenvalues()(i);
        const double v = es.eigenvectors()(0, i);
        rule.weights[i] = v * v;  // w_i / sqrt(pi)
    }
    return rule;
}

// Mean-preserving reduction of a sample set to at most max_atoms point
// masses (per-bin counts and means are exact, so the leading-order phase
// error of the binned cf cancels).
std::vector<CfAtom> bin_samples(std::span<const double> samples, int max_atoms = kMaxAtoms)
{
    if (samples.empty())
        throw std::invalid_argument("cf: empty sample set");
    if (samples.size() <= static_cast<std::size_t>(max_atoms)) {
        std::vector<CfAtom> atoms(samples.size());
        const double w = 1.0 / static_cast<double>(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i)
            atoms[i] = {w, samples[i]};
        return atoms;
    }
    const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
    const double lo = *mn, hi = *mx;
    if (hi == lo)
        return {{1.0, lo}};
    const double width = (hi - lo) / max_atoms;
    std::vector<double> sum(max_atoms, 0.0);
    std::vector<long> count(max_atoms, 0);
    for (double s : samples) {
        int b = static_cast<int>((s - lo) / width);
        b = std::clamp(b, 0, max_atoms - 1);
        sum[b] += s;
        ++count[b];
    }
    std::vector<CfAtom> atoms;
    atoms.reserve(max_atoms);
    const double inv_n = 1.0 / static_cast<double>(samples.size());
    for (int b = 0; b < max_atoms; ++b)
        if (count[b] > 0)
            atoms.push_back({count[b] * inv_n, sum[b] / count[b]});
    return atoms;
}

void check_uniform_grid(std::span<const double> u)
{
    if (u.size() < 8 || (u.size() & (u.size() - 1)) != 0)
        throw std::invalid_argument("cf grid: size must be a power of two (>= 8)");
    const double du = u[1] - u[0];
    if (!(du > 0.0))
        throw std::invalid_argument("cf grid: must be increasing");
    if (std::abs(u[u.size() / 2]) > 1e-9 * du + 1e-300)
        throw std::invalid_argument("cf grid: must be symmetric about zero");
}

// out[k] += w exp(-c (k du)^2) for k = 0..len-1 (squared-exponential
// recurrence, two multiplies per point)
void accumulate_gaussian_half(std::vector<double>& out, double w, double c, double du)
{
    const double q = std::exp(-2.0 * c * du * du);
    double g = std::exp(-c * du * du);
    double v = 1.0;
    for (double& o : out) {
        o += w * v;
        v *= g;
        g *= q;
        if (v < 1e-300)
            break;
    }
}

// Gaussian-symbol average of an atomic cf on the positive half grid:
// sum_j w_j exp(-E a_j^2 u^2 / 2)
std::vector<double> symbol_average_half(std::span<const CfAtom> atoms, double symbol_energy,
                                        double du, std::size_t len)
{
    std::vector<double> half(len, 0.0);
    for (const CfAtom& a : atoms)
        accumulate_gaussian_half(half, a.weight, 0.5 * symbol_energy * a.value * a.value, du);
    return half;
}

double symbol_average_scalar(std::span<const CfAtom> atoms, double symbol_energy, double u)
{
    double s = 0.0;
    for (const CfAtom& a : atoms)
        s += a.weight * std::exp(-0.5 * symbol_energy * a.value * a.value * u * u);
    return s;
}

std::vector<std::complex<double>> mirror_real_half(const std::vector<double>& half,
                                                   std::size_t points)
{
    const std::size_t h = points / 2;
    std::vector<std::complex<double>> full(points);
    for (std::size_t k = 0; k < h; ++k)
        full[h + k] = half[k];
    for (std::size_t k = 1; k <= h; ++k)
        full[h - k] = half[k];
    return full;
}

// Empirical cf of the atoms on the positive half grid via phase recurrence;
// mirrored with conjugate symmetry by the caller. Entries past n_eval stay
// zero (the caller truncates where the cf is known to have decayed).
std::vector<std::complex<double>> atomic_cf_half(std::span<const CfAtom> atoms, double du,
                                                 std::size_t len, double scale = 1.0,
                                                 std::size_t n_eval = SIZE_MAX)
{
    std::vector<std::complex<double>> half(len, {0.0, 0.0});
    const std::size_t stop = std::min(len, n_eval);
    for (const CfAtom& a : atoms) {
        const double step = du * a.value * scale;
        const std::complex<double> rot(std::cos(step), std::sin(step));
        std::complex<double> v(1.0, 0.0);
        for (std::size_t k = 0; k < stop; ++k) {
            half[k] += a.weight * v;
            v *= rot;
        }
    }
    return half;
}

std::vector<std::complex<double>> mirror_hermitian_half(
    const std::vector<std::complex<double>>& half, std::size_t points)
{
    const std::size_t h = points / 2;
    std::vector<std::complex<double>> full(points);
    for (std::size_t k = 0; k < h; ++k)
        full[h + k] = half[k];
    for (std::size_t k = 1; k <= h; ++k)
        full[h - k] = std::conj(half[k]);
    return full;
}

} // namespace

void GriddedCf::validate() const
{
    check_uniform_grid(u);
    if (values.size() != u.size())
        throw std::invalid_argument("GriddedCf: grid/value size mismatch");
    const std::size_t h = u.size() / 2;
    if (std::abs(values[h] - 1.0) > 1e-9)
        throw std::invalid_argument("GriddedCf: phi(0) must equal 1");
    for (std::size_t k = 0; k < u.size(); ++k)
        if (std::abs(values[k]) > 1.0 + 1e-9)
            throw std::invalid_argument("GriddedCf: |phi| must not exceed 1");
    for (std::size_t k = 1; k <= h; ++k) {
        const std::size_t hi = h + k;
        if (hi >= u.size())
            break;
        if (std::abs(values[h - k] - std::conj(values[hi])) > 1e-9)
            throw std::invalid_argument("GriddedCf: Hermitian symmetry violated");
    }
}

std::vector<double> make_u_grid(double u_max, int points)
{
    if (!(u_max > 0.0) || points < 8 || (points & (points - 1)) != 0)
        throw std::invalid_argument("make_u_grid: need u_max > 0 and a power-of-two size");
    const double du = 2.0 * u_max / points;
    std::vector<double> u(points);
    for (int i = 0; i < points; ++i)
        u[i] = (i - points / 2) * du;
    return u;
}

GriddedCf cf_of_samples(std::span<const double> samples, std::span<const double> u_grid)
{
    check_uniform_grid(u_grid);
    GriddedCf cf;
    cf.u.assign(u_grid.begin(), u_grid.end());
    cf.atoms = bin_samples(samples);
    const double du = u_grid[1] - u_grid[0];
    const std::size_t h = u_grid.size() / 2;
    cf.values = mirror_hermitian_half(atomic_cf_half(cf.atoms, du, h + 1), u_grid.size());
    return cf;
}

GriddedCf symbol_average_cf(const GriddedCf& cf, double symbol_energy, int gh_nodes)
{
    if (symbol_energy < 0.0)
        throw std::invalid_argument("symbol_average_cf: energy must be >= 0");
    GriddedCf out;
    out.u = cf.u;
    const std::size_t points = cf.u.size();
    const std::size_t h = points / 2;
    const double du = cf.u[1] - cf.u[0];

    if (!cf.atoms.empty()) {
        // exact form: E_b exp(i b u a) = exp(-E a^2 u^2 / 2) per atom
        out.values =
            mirror_real_half(symbol_average_half(cf.atoms, symbol_energy, du, h + 1), points);
        return out;
    }

    // fallback: Gauss-Hermite over b with interpolation on the stored grid;
    // arguments beyond the grid edge are treated as fully decorrelated (0)
    const GhRule& gh = gauss_hermite(gh_nodes);
    const double scale = std::sqrt(2.0 * symbol_energy);
    const double u_max = -cf.u.front();
    auto interp = [&](double v) -> std::complex<double> {
        const double av = std::abs(v);
        if (av >= u_max)
            return {0.0, 0.0};
        const double x = (av - cf.u.front()) / du;
        const auto i0 = static_cast<std::size_t>(x);
        const double frac = x - static_cast<double>(i0);
        const std::complex<double> val =
            cf.values[i0] * (1.0 - frac) + cf.values[std::min(i0 + 1, points - 1)] * frac;
        return v >= 0.0 ? val : std::conj(val);
    };
    out.values.resize(points);
    std::vector<double> half(h + 1, 0.0);
    for (std::size_t k = 0; k <= h; ++k) {
        const double u = k * du;
        double acc = 0.0;
        for (int i = 0; i < gh_nodes; ++i)
            acc += gh.weights[i] * interp(gh.nodes[i] * scale * u).real();
        half[k] = acc;
    }
    out.values = mirror_real_half(half, points);
    return out;
}

GriddedCf interference_cf(const GriddedCf& phibar, const LoadParams& load,
                          const InterferenceMode& mode)
{
    GriddedCf out;
    out.u = phibar.u;
    out.values.resize(phibar.values.size());
    if (mode.asymptotic) {
        const double beff = load.effective();
        for (std::size_t i = 0; i < out.values.size(); ++i)
            out.values[i] = std::exp(-beff * (1.0 - phibar.values[i]));
    } else {
        if (mode.users < 1 || mode.chips < 1)
            throw std::invalid_argument("interference_cf: finite mode needs K >= 1, N >= 1");
        const double f =
            overlap_probability(mode.chips, load.channel_chips, load.impulsiveness);
        const double exponent = mode.users - 1;
        for (std::size_t i = 0; i < out.values.size(); ++i)
            out.values[i] = std::pow(1.0 - f * (1.0 - phibar.values[i]), exponent);
    }
    return out;
}

GriddedCf add_noise_cf(const GriddedCf& cf, double noise_var)
{
    if (noise_var < 0.0)
        throw std::invalid_argument("add_noise_cf: variance must be >= 0");
    GriddedCf out;
    out.u = cf.u;
    out.values.resize(cf.values.size());
    for (std::size_t i = 0; i < cf.values.size(); ++i)
        out.values[i] = cf.values[i] * std::exp(-0.5 * noise_var * cf.u[i] * cf.u[i]);
    return out;
}

GriddedPdf pdf_from_cf(const GriddedCf& cf, double edge_tol, double clip_tol)
{
    check_uniform_grid(cf.u);
    const std::size_t m = cf.u.size();
    const std::size_t h = m / 2;
    const double du = cf.u[1] - cf.u[0];

    const double edge = std::max(std::abs(cf.values.front()), std::abs(cf.values.back()));
    if (edge >= edge_tol) {
        std::ostringstream msg;
        msg << "pdf_from_cf: grid too narrow, |phi(edge)| = " << edge
            << "; increase u_max beyond " << -cf.u.front();
        throw std::runtime_error(msg.str());
    }

    std::vector<std::complex<double>> work(m);
    for (std::size_t i = 0; i < m; ++i)
        work[i] = (i % 2 == 0 ? cf.values[i] : -cf.values[i]);
    fft(work);

    const double dz = 2.0 * M_PI / (static_cast<double>(m) * du);
    const double amp = du / (2.0 * M_PI);
    const double parity = (h % 2 == 0) ? 1.0 : -1.0;

    GriddedPdf pdf;
    pdf.z.resize(m);
    pdf.density.resize(m);
    double clipped = 0.0;
    double total = 0.0;
    for (std::size_t n = 0; n < m; ++n) {
        pdf.z[n] = (static_cast<double>(n) - static_cast<double>(h)) * dz;
        double p = amp * parity * (n % 2 == 0 ? 1.0 : -1.0) * work[n].real();
        if (p < 0.0) {
            clipped += -p * dz;
            p = 0.0;
        }
        total += p * dz;
        pdf.density[n] = p;
    }
    pdf.clipped_mass = clipped;
    if (clipped >= clip_tol) {
        std::ostringstream msg;
        msg << "pdf_from_cf: clipped mass " << clipped << " exceeds " << clip_tol;
        throw std::runtime_error(msg.str());
    }
    if (total <= 0.0)
        throw std::runtime_error("pdf_from_cf: inverted density has no mass");
    const double scale = 1.0 / total;
    for (double& p : pdf.density)
        p *= scale;
    return pdf;
}

double differential_entropy(const GriddedPdf& pdf)
{
    if (pdf.z.size() < 2 || pdf.z.size() != pdf.density.size())
        throw std::invalid_argument("differential_entropy: malformed pdf");
    const double dz = pdf.z[1] - pdf.z[0];
    double hsum = 0.0;
    for (double p : pdf.density)
        if (p > 0.0)
            hsum -= p * std::log(p);
    return hsum * dz;
}

namespace {

struct ScalarPipeline {
    const std::vector<CfAtom>* cross_atoms;  // may be null when load is zero
    double symbol_energy;
    double noise_var;
    LoadParams load;
    InterferenceMode mode;
    double overlap = 0.0;  // finite mode

    double abs_phi_interference_noise(double u) const
    {
        double log_phi = 0.0;
        if (cross_atoms != nullptr) {
            const double pb = symbol_average_scalar(*cross_atoms, symbol_energy, u);
            if (mode.asymptotic)
                log_phi = -load.effective() * (1.0 - pb);
            else
                log_phi = (mode.users - 1) * std::log(std::max(1e-300, 1.0 - overlap * (1.0 - pb)));
        }
        return std::exp(log_phi - 0.5 * noise_var * u * u);
    }
};

double select_u_max(const ScalarPipeline& pipe, double tol)
{
    double hi = 1.0;
    int guard = 0;
    while (pipe.abs_phi_interference_noise(hi) >= tol) {
        hi *= 2.0;
        if (++guard > 64)
            throw std::runtime_error("mutual_information: cf does not decay; "
                                     "check noise variance");
    }
    double lo = hi / 2.0;
    for (int i = 0; i < 48; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (pipe.abs_phi_interference_noise(mid) >= tol)
            lo = mid;
        else
            hi = mid;
    }
    return 1.05 * hi;
}

} // namespace

MiResult mutual_information(std::span<const double> self_samples, const GriddedCf& cross_cf,
                            const MiConfig& cfg)
{
    if (self_samples.empty())
        throw std::invalid_argument("mutual_information: self-coupling samples required");
    MiResult res;
    if (cfg.symbol_energy == 0.0)
        return res;  // zero-energy symbols carry no information
    if (!(cfg.symbol_energy > 0.0))
        throw std::invalid_argument("mutual_information: symbol energy must be >= 0");

    const bool has_interference =
        cfg.mode.asymptotic ? cfg.load.effective() > 0.0 : cfg.mode.users > 1;
    if (has_interference && cross_cf.atoms.empty())
        throw std::invalid_argument(
            "mutual_information: cross cf must carry sample atoms (use cf_of_samples)");

    ScalarPipeline pipe;
    pipe.cross_atoms = has_interference ? &cross_cf.atoms : nullptr;
    pipe.symbol_energy = cfg.symbol_energy;
    pipe.noise_var = cfg.noise_var;
    pipe.load = cfg.load;
    pipe.mode = cfg.mode;
    if (!cfg.mode.asymptotic)
        pipe.overlap = overlap_probability(cfg.mode.chips, cfg.load.channel_chips,
                                           cfg.load.impulsiveness);

    res.smoothed = !(cfg.noise_var > 0.0);
    if (res.smoothed)
        pipe.noise_var = cfg.min_smoothing * cfg.symbol_energy;
    res.noise_var_used = pipe.noise_var;

    // grid wide enough that the interference-plus-noise cf has decayed
    const double u_max = select_u_max(pipe, 0.5 * cfg.edge_tol);
    res.u_max = u_max;
    const std::vector<double> grid = make_u_grid(u_max, cfg.grid_points);
    const double du = grid[1] - grid[0];
    const std::size_t points = grid.size();
    const std::size_t h = points / 2;

    // phi_{S+nu} on the grid
    GriddedCf phi_sn;
    phi_sn.u = grid;
    if (has_interference) {
        GriddedCf phibar;
        phibar.u = grid;
        phibar.values = mirror_real_half(
            symbol_average_half(cross_cf.atoms, cfg.symbol_energy, du, h + 1), points);
        phi_sn = add_noise_cf(interference_cf(phibar, cfg.load, cfg.mode), pipe.noise_var);
    } else {
        GriddedCf unity;
        unity.u = grid;
        unity.values.assign(points, {1.0, 0.0});
        phi_sn = add_noise_cf(unity, pipe.noise_var);
    }

    // h(z): multiply by the Gaussian-symbol average of the self-coupling cf
    const std::vector<CfAtom> self_atoms = bin_samples(self_samples);
    {
        const std::vector<double> selfmix_half =
            symbol_average_half(self_atoms, cfg.symbol_energy, du, h + 1);
        GriddedCf phi_z;
        phi_z.u = grid;
        phi_z.values = mirror_real_half(selfmix_half, points);
        for (std::size_t i = 0; i < points; ++i)
            phi_z.values[i] *= phi_sn.values[i];
        const GriddedPdf pdf = pdf_from_cf(phi_z, cfg.edge_tol);
        res.max_clipped_mass = std::max(res.max_clipped_mass, pdf.clipped_mass);
        res.h_total = differential_entropy(pdf);
    }

    // h(z | b): average over Gaussian symbols of the entropy of
    // a_kk b + S + nu. The mean self coupling only shifts the conditional
    // density, so it is dropped (entropy is shift invariant) and the
    // centered cf is evaluated at the scaled argument b u.
    const double self_mean = mean(self_samples);
    const double self_var = variance(self_samples);
    if (self_var < 1e-14) {
        const GriddedPdf pdf = pdf_from_cf(phi_sn, cfg.edge_tol);
        res.max_clipped_mass = std::max(res.max_clipped_mass, pdf.clipped_mass);
        res.h_conditional = differential_entropy(pdf);
    } else {
        // a binned atom set keeps the conditional-cf evaluation affordable;
        // per-bin means are exact so the leading phase error cancels
        std::vector<CfAtom> centered = bin_samples(self_samples, 2048);
        for (CfAtom& a : centered)
            a.value -= self_mean;

        // collapse +/- Gauss-Hermite nodes: only |b| matters for the entropy
        const GhRule& gh = gauss_hermite(cfg.gh_nodes);
        const double scale = std::sqrt(2.0 * cfg.symbol_energy);
        std::vector<std::pair<double, double>> b_nodes;  // (|b|, weight)
        for (int i = 0; i < cfg.gh_nodes; ++i) {
            if (gh.weights[i] < 1e-14)
                continue;
            const double b = std::abs(gh.nodes[i]) * scale;
            bool merged = false;
            for (auto& [bv, w] : b_nodes)
                if (std::abs(bv - b) < 1e-12 * (1.0 + b)) {
                    w += gh.weights[i];
                    merged = true;
                    break;
                }
            if (!merged)
                b_nodes.emplace_back(b, gh.weights[i]);
        }

        std::vector<double> entropies(b_nodes.size(), 0.0);
        std::vector<double> clipped(b_nodes.size(), 0.0);
        std::vector<std::exception_ptr> failures(b_nodes.size());
        const int workers = std::max(1, cfg.workers);
        std::vector<std::thread> pool;
        std::size_t next = 0;
        auto run_node = [&](std::size_t idx) {
            try {
                GriddedCf cond;
                cond.u = grid;
                cond.values = mirror_hermitian_half(
                    atomic_cf_half(centered, du, h + 1, b_nodes[idx].first), points);
                for (std::size_t i = 0; i < points; ++i)
                    cond.values[i] *= phi_sn.values[i];
                const GriddedPdf pdf = pdf_from_cf(cond, cfg.edge_tol);
                clipped[idx] = pdf.clipped_mass;
                entropies[idx] = differential_entropy(pdf);
            } catch (...) {
                failures[idx] = std::current_exception();
            }
        };
        if (workers <= 1) {
            for (; next < b_nodes.size(); ++next)
                run_node(next);
        } else {
            std::mutex take;
            for (int w = 0; w < workers; ++w)
                pool.emplace_back([&] {
                    for (;;) {
                        std::size_t idx;
                        {
                            std::lock_guard<std::mutex> lock(take);
                            if (next >= b_nodes.size())
                                return;
                            idx = next++;
                        }
                        run_node(idx);
                    }
                });
            for (auto& t : pool)
                t.join();
        }
        for (const auto& f : failures)
            if (f)
                std::rethrow_exception(f);

        double total_w = 0.0, acc = 0.0;
        for (std::size_t i = 0; i < b_nodes.size(); ++i) {
            total_w += b_nodes[i].second;
            acc += b_nodes[i].second * entropies[i];
            res.max_clipped_mass = std::max(res.max_clipped_mass, clipped[i]);
        }
        res.h_conditional = acc / total_w;
    }

    res.mi_nats = res.h_total - res.h_conditional;
    if (res.mi_nats < 0.0 && res.mi_nats > -1e-6)
        res.mi_nats = 0.0;  // numeric round-off on a vanishing information
    return res;
}

double interference_variance(const LoadParams& load, const InterferenceMode& mode,
                             double symbol_energy, double cross_second_moment)
{
    if (mode.asymptotic)
        return load.effective() * symbol_energy * cross_second_moment;
    const double f = overlap_probability(mode.chips, load.channel_chips, load.impulsiveness);
    return (mode.users - 1) * f * symbol_energy * cross_second_moment;
}

double gaussian_lower_bound(std::span<const double> self_samples, double interference_var,
                            double noise_var, double symbol_energy)
{
    if (interference_var < 0.0 || noise_var < 0.0)
        throw std::invalid_argument("gaussian_lower_bound: variances must be >= 0");
    if (self_samples.empty())
        throw std::invalid_argument("gaussian_lower_bound: samples required");
    const double denom = interference_var + noise_var;
    double acc = 0.0;
    for (double a : self_samples) {
        if (denom <= 0.0)
            return a == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        acc += 0.5 * std::log1p(symbol_energy * a * a / denom);
    }
    return acc / static_cast<double>(self_samples.size());
}

double spectral_efficiency(double mi_nats, double beta, int impulsiveness)
{
    if (mi_nats < 0.0)
        throw std::invalid_argument("spectral_efficiency: mutual information must be >= 0");
    if (impulsiveness < 1)
        throw std::invalid_argument("spectral_efficiency: impulsiveness index must be >= 1");
    return beta / impulsiveness * mi_nats;
}

} // namespace uwbsim

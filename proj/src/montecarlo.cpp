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

#include "uwbsim/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "uwbsim/estimation.hpp"

namespace uwbsim {

namespace {

constexpr long kChunk = 8192;  // early-stop granularity; keeps runs
                               // worker-count invariant

// Contiguous-range worker pool; results must be order-independent.
template <typename Fn>
void parallel_ranges(long begin, long end, int workers, Fn&& fn)
{
    const long n = end - begin;
    if (workers <= 1 || n < 256) {
        fn(begin, end, 0);
        return;
    }
    const int w = std::min<long>(workers, n);
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (int i = 0; i < w; ++i) {
        const long lo = begin + n * i / w;
        const long hi = begin + n * (i + 1) / w;
        pool.emplace_back([&fn, lo, hi, i] { fn(lo, hi, i); });
    }
    for (auto& t : pool)
        t.join();
}

DiscreteChannel draw_channel(const BerExperiment& exp, Rng& rng)
{
    if (exp.config.channel_chips == 0) {
        // single-tap channel: no multipath, unit energy by construction
        DiscreteChannel c;
        c.taps = {1.0};
        c.tap_spacing_s = 1.0 / exp.config.bandwidth_hz;
        return c;
    }
    // generating paths past the last retained bin would be wasted work
    const double keep_ns =
        (std::floor(exp.delay_spread_s * exp.config.bandwidth_hz + 1e-9) + 1.0) /
        exp.config.bandwidth_hz * 1e9;
    const ContinuousChannel cont = sample_sv_channel(exp.sv, rng.next_u64(), keep_ns);
    return normalize_energy(discretize(cont, exp.config.bandwidth_hz, exp.delay_spread_s,
                                       exp.config.impulsiveness));
}

std::vector<double> draw_error(const SystemConfig& cfg, std::size_t taps, Rng& rng)
{
    if (cfg.csi_error_var <= 0.0)
        return {};
    std::vector<double> xi(taps);
    const double sd = std::sqrt(cfg.csi_error_var);
    for (double& v : xi)
        v = sd * rng.normal();
    return xi;
}

// Channel estimation error from an actual downlink training pass at the
// experiment's noise level.
std::vector<double> training_error(const BerExperiment& exp, const SystemConfig& cfg,
                                   const DiscreteChannel& c, Rng& rng)
{
    const TrainingSequence seq =
        gen_mseq(exp.csi.mseq_order, static_cast<std::uint32_t>(rng.next_u64() | 1u),
                 exp.csi.training_amplitude, cfg.impulsiveness);
    const std::vector<double> rx = simulate_dl_training(c, seq, cfg.noise_var, rng);
    const DlEstimate est = dl_estimate(rx, seq, cfg);
    std::vector<double> xi(c.taps.size());
    for (std::size_t i = 0; i < xi.size(); ++i)
        xi[i] = est.channel.taps[i] - c.taps[i];
    return xi;
}

struct TrialDraw {
    std::vector<DiscreteChannel> channels;
    std::vector<std::vector<double>> errors;
    std::vector<SpreadingVector> codes;
    std::vector<double> symbols;
};

TrialDraw draw_trial(const BerExperiment& exp, const SystemConfig& cfg, Rng& rng)
{
    const std::size_t k = static_cast<std::size_t>(cfg.users);
    TrialDraw d;
    d.channels.reserve(k);
    d.errors.reserve(k);
    d.codes.reserve(k);
    d.symbols.reserve(k);
    const double amp = std::sqrt(cfg.symbol_energy);
    for (std::size_t j = 0; j < k; ++j) {
        d.channels.push_back(draw_channel(exp, rng));
        if (exp.csi.kind == CsiMode::Kind::Training)
            d.errors.push_back(training_error(exp, cfg, d.channels.back(), rng));
        else
            d.errors.push_back(draw_error(cfg, d.channels.back().taps.size(), rng));
        d.codes.push_back(make_th_code(cfg.chips_per_symbol, cfg.impulsiveness, rng));
        d.symbols.push_back(amp * rng.sign());
    }
    return d;
}

// 1 on a sign error of the tracked user's symbol
int trial_outcome(const BerExperiment& exp, const SystemConfig& cfg, std::uint64_t stream)
{
    Rng rng = Rng::substream(exp.seed, stream);
    const TrialDraw d = draw_trial(exp, cfg, rng);
    const DecisionVariable z =
        decision_variable(exp.scheme, cfg, d.symbols, d.channels, d.errors, d.codes, rng);
    return z.value * d.symbols[0] <= 0.0 ? 1 : 0;
}

Histogram make_histogram(std::span<const double> values, int bins)
{
    Histogram h;
    h.lo = -1.0;
    h.bin_width = 2.0 / bins;
    h.density.assign(bins, 0.0);
    if (values.empty())
        return h;
    for (double v : values) {
        int b = static_cast<int>(std::floor((v - h.lo) / h.bin_width));
        b = std::clamp(b, 0, bins - 1);
        h.density[b] += 1.0;
    }
    const double norm = 1.0 / (static_cast<double>(values.size()) * h.bin_width);
    for (double& d : h.density)
        d *= norm;
    return h;
}

} // namespace

BerResult run_ber(const BerExperiment& exp)
{
    exp.config.validate();
    if (exp.max_trials < 1)
        throw std::invalid_argument("run_ber: trials must be >= 1");
    for (double s : exp.snr_db)
        if (!std::isfinite(s))
            throw std::invalid_argument("run_ber: SNR grid must be finite");

    BerResult result;
    result.points.reserve(exp.snr_db.size());

    // fixed-channel debugging mode: one draw shared by every trial
    std::vector<DiscreteChannel> fixed;
    if (!exp.redraw_channels) {
        Rng rng = Rng::substream(exp.seed, 0xfeedULL << 40);
        for (int j = 0; j < exp.config.users; ++j)
            fixed.push_back(draw_channel(exp, rng));
    }

    for (std::size_t p = 0; p < exp.snr_db.size(); ++p) {
        SystemConfig cfg = exp.config;
        cfg.noise_var = cfg.symbol_energy / std::pow(10.0, exp.snr_db[p] / 10.0);

        long errors = 0;
        long done = 0;
        while (done < exp.max_trials && errors < exp.target_errors) {
            const long chunk = std::min(kChunk, exp.max_trials - done);
            std::vector<long> partial(static_cast<std::size_t>(exp.workers) + 1, 0);
            parallel_ranges(done, done + chunk, exp.workers, [&](long lo, long hi, int w) {
                long e = 0;
                for (long t = lo; t < hi; ++t) {
                    const std::uint64_t stream =
                        (static_cast<std::uint64_t>(p) << 40) + static_cast<std::uint64_t>(t);
                    if (!exp.redraw_channels) {
                        Rng rng = Rng::substream(exp.seed, stream);
                        TrialDraw d;
                        const double amp = std::sqrt(cfg.symbol_energy);
                        for (int j = 0; j < cfg.users; ++j) {
                            d.channels.push_back(fixed[j]);
                            d.errors.push_back(
                                draw_error(cfg, fixed[j].taps.size(), rng));
                            d.codes.push_back(
                                make_th_code(cfg.chips_per_symbol, cfg.impulsiveness, rng));
                            d.symbols.push_back(amp * rng.sign());
                        }
                        const DecisionVariable z = decision_variable(
                            exp.scheme, cfg, d.symbols, d.channels, d.errors, d.codes, rng);
                        e += z.value * d.symbols[0] <= 0.0 ? 1 : 0;
                    } else {
                        e += trial_outcome(exp, cfg, stream);
                    }
                }
                partial[w] += e;
            });
            for (long e : partial)
                errors += e;
            done += chunk;
        }

        SnrPointResult point;
        point.snr_db = exp.snr_db[p];
        point.trials = done;
        point.errors = errors;
        point.pe = static_cast<double>(errors) / static_cast<double>(done);
        point.std_err = binomial_stderr(point.pe, static_cast<std::size_t>(done));
        result.points.push_back(point);
    }
    return result;
}

EquivalenceReport equivalence_test(const BerExperiment& exp, double snr_db,
                                   const EquivalenceOptions& opts)
{
    if (exp.config.users != 1)
        throw std::invalid_argument("equivalence_test: single-user setting required (K = 1)");

    SystemConfig cfg = exp.config;
    cfg.noise_var = cfg.symbol_energy / std::pow(10.0, snr_db / 10.0);
    const double noise_sd = std::sqrt(cfg.noise_var);
    const long n = exp.max_trials;

    std::vector<double> z_tr(n), z_ar(n);
    std::vector<long> err_tr(static_cast<std::size_t>(exp.workers) + 1, 0);
    std::vector<long> err_ar(err_tr);

    parallel_ranges(0, n, exp.workers, [&](long lo, long hi, int w) {
        for (long t = lo; t < hi; ++t) {
            Rng rng = Rng::substream(exp.seed, static_cast<std::uint64_t>(t));
            const DiscreteChannel c = draw_channel(exp, rng);
            const std::vector<double> xi = draw_error(cfg, c.taps.size(), rng);
            const double b = std::sqrt(cfg.symbol_energy) * rng.sign();

            double self_tr;
            if (opts.normalized_prefilter) {
                self_tr = tr_self_coupling(c, xi);
            } else {
                // negative control: skip the transmit-energy normalization
                self_tr = 0.0;
                for (std::size_t i = 0; i < c.taps.size(); ++i) {
                    const double est =
                        c.taps[i] + (xi.empty() ? 0.0 : xi[xi.size() - 1 - i]);
                    self_tr += c.taps[i] * est;
                }
            }
            const double self_ar = ar_self_coupling(c, xi);

            const double zt = self_tr * b + noise_sd * rng.normal();
            const double za = self_ar * b + noise_sd * rng.normal();
            z_tr[t] = zt;
            z_ar[t] = za;
            err_tr[w] += zt * b <= 0.0 ? 1 : 0;
            err_ar[w] += za * b <= 0.0 ? 1 : 0;
        }
    });

    EquivalenceReport rep;
    rep.trials = n;
    long et = 0, ea = 0;
    for (std::size_t i = 0; i < err_tr.size(); ++i) {
        et += err_tr[i];
        ea += err_ar[i];
    }
    rep.pe_tr = static_cast<double>(et) / n;
    rep.pe_ar = static_cast<double>(ea) / n;
    rep.se_tr = binomial_stderr(rep.pe_tr, n);
    rep.se_ar = binomial_stderr(rep.pe_ar, n);
    rep.ks = ks_two_sample(z_tr, z_ar);
    const double combined = std::sqrt(rep.se_tr * rep.se_tr + rep.se_ar * rep.se_ar);
    rep.pe_match = std::abs(rep.pe_tr - rep.pe_ar) <= 3.0 * combined;
    rep.ks_pass = rep.ks.p_value > opts.ks_alpha;
    rep.passed = rep.pe_match && rep.ks_pass;
    return rep;
}

CouplingStats coupling_histogram(const SystemConfig& config, Scheme scheme,
                                 double csi_error_var, long samples, std::uint64_t seed,
                                 const SvParams& sv, double delay_spread_s)
{
    if (samples < 1)
        throw std::invalid_argument("coupling_histogram: need at least one sample");

    BerExperiment helper;
    helper.config = config;
    helper.config.csi_error_var = csi_error_var;
    helper.sv = sv;
    helper.delay_spread_s = delay_spread_s;

    CouplingStats stats;
    stats.cross_nonzero.reserve(static_cast<std::size_t>(samples));
    stats.self.reserve(static_cast<std::size_t>(samples));

    std::uint64_t draw = 0;
    while (static_cast<long>(stats.cross_nonzero.size()) < samples) {
        Rng rng = Rng::substream(seed, draw++);
        const DiscreteChannel c_k = draw_channel(helper, rng);
        const DiscreteChannel c_j = draw_channel(helper, rng);
        const std::vector<double> xi_k = draw_error(helper.config, c_k.taps.size(), rng);
        const std::vector<double> xi_j = draw_error(helper.config, c_j.taps.size(), rng);
        const SpreadingVector code_k =
            make_th_code(config.chips_per_symbol, config.impulsiveness, rng);
        const SpreadingVector code_j =
            make_th_code(config.chips_per_symbol, config.impulsiveness, rng);

        const std::span<const double> cross_err =
            scheme == Scheme::TimeReversal ? std::span<const double>(xi_j)
                                           : std::span<const double>(xi_k);
        const double a = cross_coupling(scheme, c_k, c_j, cross_err, code_k, code_j);
        ++stats.total_draws;
        if (a == 0.0) {
            ++stats.zero_draws;
        } else {
            stats.cross_nonzero.push_back(a);
        }
        if (static_cast<long>(stats.self.size()) < samples) {
            stats.self.push_back(scheme == Scheme::TimeReversal
                                     ? tr_self_coupling(c_k, xi_k)
                                     : ar_self_coupling(c_k, xi_k));
        }
    }

    stats.zero_mass =
        static_cast<double>(stats.zero_draws) / static_cast<double>(stats.total_draws);
    stats.var_nonzero = variance(stats.cross_nonzero);
    stats.kurt_nonzero = kurtosis(stats.cross_nonzero);
    long atoms = 0;
    for (double a : stats.cross_nonzero)
        atoms += a > 1.0 - 1e-9 ? 1 : 0;
    stats.atom_mass = static_cast<double>(atoms) / static_cast<double>(stats.cross_nonzero.size());
    stats.cross_hist = make_histogram(stats.cross_nonzero, 400);
    stats.self_hist = make_histogram(stats.self, 400);
    return stats;
}

} // namespace uwbsim

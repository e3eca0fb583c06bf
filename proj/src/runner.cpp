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

#include "uwbsim/runner.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "uwbsim/estimation.hpp"
#include "uwbsim/montecarlo.hpp"
#include "uwbsim/mutual_info.hpp"

namespace uwbsim {

namespace {

namespace fs = std::filesystem;

// resolved-config comment block placed at the top of every CSV
std::string provenance_header(const RunConfig& cfg)
{
    std::ostringstream os;
    std::istringstream lines(cfg.resolved_text());
    std::string line;
    while (std::getline(lines, line))
        os << "# " << line << '\n';
    return os.str();
}

void write_atomic(const fs::path& target, const std::string& content)
{
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, target);
}

// (beta, sigma_xi2) rows after zip/broadcast; defaults fill absent lists
std::vector<std::pair<double, double>> load_error_pairs(const RunConfig& cfg)
{
    std::vector<double> betas = cfg.beta;
    if (betas.empty()) {
        if (!cfg.users.empty())
            for (long k : cfg.users)
                betas.push_back(static_cast<double>(k) / cfg.chips);
        else
            betas.push_back(0.0);
    }
    std::vector<double> sigmas = cfg.sigma_xi2;
    if (sigmas.empty())
        sigmas.push_back(0.0);
    const std::size_t n = std::max(betas.size(), sigmas.size());
    std::vector<std::pair<double, double>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        pairs.emplace_back(betas[std::min(i, betas.size() - 1)],
                           sigmas[std::min(i, sigmas.size() - 1)]);
    return pairs;
}

SystemConfig system_config(const RunConfig& cfg, double beta, double sigma_xi2)
{
    SystemConfig sc;
    sc.chips_per_symbol = cfg.chips;
    sc.users = std::max(1, static_cast<int>(std::lround(beta * cfg.chips)));
    sc.impulsiveness = cfg.impulsiveness;
    sc.bandwidth_hz = cfg.bandwidth_hz();
    sc.channel_chips = cfg.channel_chips();
    sc.symbol_energy = cfg.symbol_energy;
    sc.csi_error_var = sigma_xi2;
    return sc;
}

BerExperiment ber_experiment(const RunConfig& cfg, double beta, double sigma_xi2,
                             Scheme scheme)
{
    BerExperiment exp;
    exp.config = system_config(cfg, beta, sigma_xi2);
    exp.sv = channel_preset(cfg.channel);
    exp.delay_spread_s = cfg.delay_spread_s;
    exp.snr_db = cfg.snr_db;
    exp.scheme = scheme;
    exp.max_trials = cfg.trials;
    exp.seed = cfg.seed;
    exp.workers = cfg.workers;
    if (cfg.training_budget) {
        exp.csi.kind = CsiMode::Kind::Training;
        exp.csi.training_amplitude = cfg.training_amplitude;
        exp.csi.mseq_order = cfg.training_mseq_order;
    }
    return exp;
}

double training_error_var(const RunConfig& cfg, double noise_var)
{
    const double n_t = static_cast<double>((1 << cfg.training_mseq_order) - 1);
    return noise_var / (cfg.training_amplitude * cfg.training_amplitude * n_t);
}

RunOutcome run_ber_experiment(const RunConfig& cfg, const fs::path& out_dir)
{
    std::ostringstream csv;
    csv << provenance_header(cfg);
    csv << "snr_db,scheme,beta,sigma_xi2,iota,pe,stderr,trials\n";
    for (const auto& [beta, sigma] : load_error_pairs(cfg)) {
        for (const auto& scheme_name_ : cfg.schemes) {
            const Scheme scheme = scheme_from_name(scheme_name_);
            const BerExperiment exp = ber_experiment(cfg, beta, sigma, scheme);
            const BerResult result = run_ber(exp);
            for (const auto& p : result.points) {
                const double sigma_col =
                    cfg.training_budget
                        ? training_error_var(cfg, cfg.symbol_energy /
                                                      std::pow(10.0, p.snr_db / 10.0))
                        : sigma;
                csv << format_double(p.snr_db) << ',' << scheme_name_ << ','
                    << format_double(beta) << ',' << format_double(sigma_col) << ','
                    << cfg.impulsiveness << ',' << format_double(p.pe) << ','
                    << format_double(p.std_err) << ',' << p.trials << '\n';
            }
        }
    }
    RunOutcome out;
    const fs::path target = out_dir / "ber.csv";
    write_atomic(target, csv.str());
    out.files.push_back(target.string());
    return out;
}

RunOutcome run_equivalence_experiment(const RunConfig& cfg, const fs::path& out_dir)
{
    RunOutcome out;
    std::ostringstream csv;
    csv << provenance_header(cfg);
    csv << "snr_db,sigma_xi2,pe_tr,pe_ar,ks_stat,ks_pvalue,passed\n";
    bool all_pass = true;
    std::vector<double> sigmas = cfg.sigma_xi2.empty() ? std::vector<double>{0.0}
                                                       : cfg.sigma_xi2;
    for (double sigma : sigmas) {
        for (double snr : cfg.snr_db) {
            BerExperiment exp = ber_experiment(cfg, 0.0, sigma, Scheme::TimeReversal);
            exp.config.users = 1;
            const EquivalenceReport rep = equivalence_test(exp, snr);
            all_pass = all_pass && rep.passed;
            std::ostringstream line;
            line << (rep.passed ? "PASS" : "FAIL") << " equivalence: snr=" << snr
                 << " dB sigma_xi2=" << sigma << " |dPe|=" << std::abs(rep.pe_tr - rep.pe_ar)
                 << " KS p=" << rep.ks.p_value;
            out.messages.push_back(line.str());
            csv << format_double(snr) << ',' << format_double(sigma) << ','
                << format_double(rep.pe_tr) << ',' << format_double(rep.pe_ar) << ','
                << format_double(rep.ks.statistic) << ',' << format_double(rep.ks.p_value)
                << ',' << (rep.passed ? 1 : 0) << '\n';
        }
    }
    const fs::path target = out_dir / "equivalence.csv";
    write_atomic(target, csv.str());
    out.files.push_back(target.string());
    out.exit_code = all_pass ? 0 : 3;
    return out;
}

RunOutcome run_coupling_experiment(const RunConfig& cfg, const fs::path& out_dir)
{
    std::ostringstream moments, hist;
    moments << provenance_header(cfg);
    moments << "scheme,sigma_xi2,samples,zero_mass,var_nonzero,kurt_nonzero,atom_mass\n";
    hist << provenance_header(cfg);
    hist << "scheme,sigma_xi2,bin_center,cross_density,self_density\n";

    std::vector<double> sigmas = cfg.sigma_xi2.empty() ? std::vector<double>{0.0}
                                                       : cfg.sigma_xi2;
    for (const auto& scheme_name_ : cfg.schemes) {
        const Scheme scheme = scheme_from_name(scheme_name_);
        for (double sigma : sigmas) {
            const SystemConfig sc = system_config(cfg, 0.0, sigma);
            const CouplingStats stats =
                coupling_histogram(sc, scheme, sigma, cfg.coupling_samples, cfg.seed,
                                   channel_preset(cfg.channel), cfg.delay_spread_s);
            moments << scheme_name_ << ',' << format_double(sigma) << ','
                    << stats.cross_nonzero.size() << ',' << format_double(stats.zero_mass)
                    << ',' << format_double(stats.var_nonzero) << ','
                    << format_double(stats.kurt_nonzero) << ','
                    << format_double(stats.atom_mass) << '\n';
            for (std::size_t b = 0; b < stats.cross_hist.density.size(); ++b) {
                const double center =
                    stats.cross_hist.lo + (b + 0.5) * stats.cross_hist.bin_width;
                hist << scheme_name_ << ',' << format_double(sigma) << ','
                     << format_double(center) << ','
                     << format_double(stats.cross_hist.density[b]) << ','
                     << format_double(stats.self_hist.density[b]) << '\n';
            }
        }
    }
    RunOutcome out;
    const fs::path m_target = out_dir / "coupling_moments.csv";
    const fs::path h_target = out_dir / "coupling_hist.csv";
    write_atomic(m_target, moments.str());
    write_atomic(h_target, hist.str());
    out.files = {m_target.string(), h_target.string()};
    return out;
}

RunOutcome run_mi_experiment(const RunConfig& cfg, const fs::path& out_dir)
{
    std::ostringstream csv;
    csv << provenance_header(cfg);
    csv << "snr_db,scheme,beta,sigma_xi2,iota,mi_nats,mi_lower_nats,spectral_eff,"
           "spectral_eff_lower\n";

    const std::vector<double> diag_grid = make_u_grid(64.0, 1 << 12);
    for (const auto& [beta, sigma] : load_error_pairs(cfg)) {
        const SystemConfig sc = system_config(cfg, beta, sigma);
        for (const auto& scheme_name_ : cfg.schemes) {
            const Scheme scheme = scheme_from_name(scheme_name_);
            const CouplingStats stats =
                coupling_histogram(sc, scheme, sigma, cfg.coupling_samples, cfg.seed,
                                   channel_preset(cfg.channel), cfg.delay_spread_s);
            const std::vector<double> self(stats.self.begin(),
                                           stats.self.begin() +
                                               std::min<std::size_t>(stats.self.size(),
                                                                     cfg.self_samples));
            const GriddedCf cross_cf = cf_of_samples(stats.cross_nonzero, diag_grid);

            MiConfig mi_cfg;
            mi_cfg.symbol_energy = cfg.symbol_energy;
            mi_cfg.load = {beta, sc.channel_chips, sc.impulsiveness};
            mi_cfg.mode = cfg.mi_mode == "finite"
                              ? InterferenceMode::finite(sc.users, sc.chips_per_symbol)
                              : InterferenceMode::limit();
            mi_cfg.workers = cfg.workers;

            double m2 = 0.0;
            for (double a : stats.cross_nonzero)
                m2 += a * a;
            m2 /= static_cast<double>(stats.cross_nonzero.size());

            for (double snr : cfg.snr_db) {
                mi_cfg.noise_var = cfg.symbol_energy / std::pow(10.0, snr / 10.0);
                const MiResult mi = mutual_information(self, cross_cf, mi_cfg);
                const double var_s = interference_variance(mi_cfg.load, mi_cfg.mode,
                                                           cfg.symbol_energy, m2);
                const double lower = gaussian_lower_bound(self, var_s, mi.noise_var_used,
                                                          cfg.symbol_energy);
                csv << format_double(snr) << ',' << scheme_name_ << ','
                    << format_double(beta) << ',' << format_double(sigma) << ','
                    << cfg.impulsiveness << ',' << format_double(mi.mi_nats) << ','
                    << format_double(lower) << ','
                    << format_double(spectral_efficiency(mi.mi_nats, beta,
                                                         cfg.impulsiveness))
                    << ','
                    << format_double(spectral_efficiency(lower, beta, cfg.impulsiveness))
                    << '\n';
            }
        }
    }
    RunOutcome out;
    const fs::path target = out_dir / "mi.csv";
    write_atomic(target, csv.str());
    out.files.push_back(target.string());
    return out;
}

RunOutcome run_estimation_experiment(const RunConfig& cfg, const fs::path& out_dir)
{
    std::ostringstream csv;
    csv << provenance_header(cfg);
    csv << "snr_db,sigma_xi2_theory,sigma_xi2_measured,zf_max_err,pe_training,"
           "pe_training_se,pe_direct,pe_direct_se,trials\n";

    RunConfig training_cfg = cfg;
    training_cfg.training_budget = true;
    training_cfg.sigma_xi2.clear();

    const SvParams& sv = channel_preset(cfg.channel);
    const long est_trials = std::min<long>(cfg.trials, 10000);

    for (double snr : cfg.snr_db) {
        const double noise_var = cfg.symbol_energy / std::pow(10.0, snr / 10.0);
        const double theory_var = training_error_var(cfg, noise_var);

        // measured per-tap error variance of the downlink matched filter
        SystemConfig sc = system_config(cfg, 0.0, 0.0);
        sc.noise_var = noise_var;
        const TrainingSequence seq = gen_mseq(cfg.training_mseq_order, 1u,
                                              cfg.training_amplitude, cfg.impulsiveness);
        Rng rng = Rng::substream(cfg.seed, 0xe5717ULL);
        double sq_sum = 0.0;
        long tap_count = 0;
        for (long t = 0; t < est_trials; ++t) {
            const ContinuousChannel cont = sample_sv_channel(sv, rng.next_u64());
            const DiscreteChannel c = normalize_energy(
                discretize(cont, sc.bandwidth_hz, cfg.delay_spread_s, sc.impulsiveness));
            const std::vector<double> rx = simulate_dl_training(c, seq, noise_var, rng);
            const DlEstimate est = dl_estimate(rx, seq, sc);
            for (std::size_t i = 0; i < c.taps.size(); ++i) {
                const double err = est.channel.taps[i] - c.taps[i];
                sq_sum += err * err;
                ++tap_count;
            }
        }
        const double measured_var = sq_sum / static_cast<double>(tap_count);

        // noiseless ZF recovery across K users
        double zf_max_err = 0.0;
        {
            SystemConfig zf_cfg = sc;
            zf_cfg.users = 3;
            zf_cfg.noise_var = 0.0;
            std::vector<DiscreteChannel> chans;
            std::vector<TrainingSequence> seqs;
            Rng zf_rng = Rng::substream(cfg.seed, 0x2fULL);
            for (int k = 0; k < zf_cfg.users; ++k) {
                const ContinuousChannel cont = sample_sv_channel(sv, zf_rng.next_u64());
                chans.push_back(normalize_energy(discretize(
                    cont, zf_cfg.bandwidth_hz, cfg.delay_spread_s, zf_cfg.impulsiveness)));
                seqs.push_back(cyclic_shift(
                    gen_mseq(cfg.mseq_order, 1u, cfg.training_amplitude, cfg.impulsiveness),
                    zf_rng.uniform_int(0, (1 << cfg.mseq_order) - 2)));
            }
            const std::vector<double> rx = simulate_ul_training(chans, seqs, 0.0, zf_rng);
            const std::vector<DiscreteChannel> est =
                ul_estimate(rx, seqs, EstimatorKind::zf(), zf_cfg);
            for (int k = 0; k < zf_cfg.users; ++k)
                for (std::size_t i = 0; i < chans[k].taps.size(); ++i)
                    zf_max_err = std::max(zf_max_err,
                                          std::abs(est[k].taps[i] - chans[k].taps[i]));
        }

        // closure: BER with simulated training vs the derived error variance
        RunConfig point_cfg = cfg;
        point_cfg.snr_db = {snr};
        BerExperiment train_exp =
            ber_experiment(point_cfg, 0.0, 0.0, Scheme::TimeReversal);
        train_exp.csi.kind = CsiMode::Kind::Training;
        train_exp.csi.training_amplitude = cfg.training_amplitude;
        train_exp.csi.mseq_order = cfg.training_mseq_order;
        train_exp.config.users = 1;
        const BerResult pe_training = run_ber(train_exp);

        BerExperiment direct_exp = train_exp;
        direct_exp.csi.kind = CsiMode::Kind::Direct;
        direct_exp.config.csi_error_var = theory_var;
        direct_exp.seed = cfg.seed + 1;  // independent draws, same law
        const BerResult pe_direct = run_ber(direct_exp);

        csv << format_double(snr) << ',' << format_double(theory_var) << ','
            << format_double(measured_var) << ',' << format_double(zf_max_err) << ','
            << format_double(pe_training.points[0].pe) << ','
            << format_double(pe_training.points[0].std_err) << ','
            << format_double(pe_direct.points[0].pe) << ','
            << format_double(pe_direct.points[0].std_err) << ','
            << pe_training.points[0].trials << '\n';
    }

    RunOutcome out;
    const fs::path target = out_dir / "estimation.csv";
    write_atomic(target, csv.str());
    out.files.push_back(target.string());
    return out;
}

} // namespace

RunOutcome run_experiment(const RunConfig& cfg, const std::string& output_dir)
{
    const std::vector<Diagnostic> diags = validate(cfg);
    RunOutcome out;
    for (const auto& d : diags)
        out.messages.push_back(d.str());
    if (has_fatal(diags)) {
        out.exit_code = 2;
        return out;
    }

    const fs::path dir(output_dir);
    fs::create_directories(dir);

    RunOutcome result;
    if (cfg.experiment == "ber")
        result = run_ber_experiment(cfg, dir);
    else if (cfg.experiment == "equivalence")
        result = run_equivalence_experiment(cfg, dir);
    else if (cfg.experiment == "coupling")
        result = run_coupling_experiment(cfg, dir);
    else if (cfg.experiment == "mi")
        result = run_mi_experiment(cfg, dir);
    else if (cfg.experiment == "estimation")
        result = run_estimation_experiment(cfg, dir);
    else
        throw std::logic_error("unreachable: unvalidated experiment");

    result.messages.insert(result.messages.begin(), out.messages.begin(), out.messages.end());
    return result;
}

} // namespace uwbsim

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

#include "uwbsim/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "uwbsim/channel.hpp"

namespace uwbsim {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v)
{
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(trim(item));
    return out;
}

bool parse_double(const std::string& s, double& out)
{
    try {
        std::size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

bool parse_long(const std::string& s, long& out)
{
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && p == e;
}

} // namespace

std::string Diagnostic::str() const
{
    std::ostringstream os;
    os << (fatal ? "error" : "warning");
    if (line > 0)
        os << " (line " << line << ")";
    os << ": " << message;
    return os.str();
}

int RunConfig::channel_chips() const
{
    // nudged so integral T_d W / iota ratios survive binary rounding
    return static_cast<int>(
        std::floor(delay_spread_s * bandwidth_hz() / impulsiveness + 1e-9));
}

std::string format_double(double v)
{
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return ec == std::errc() ? std::string(buf, p) : std::string("nan");
}

RunConfig parse_run_config(const std::string& text, std::vector<Diagnostic>& diags)
{
    static const std::set<std::string> known = {
        "experiment",      "scheme",          "channel",        "N",
        "iota",            "T_c",             "T_d",            "symbol_energy",
        "beta",            "K",               "sigma_xi2",      "training_amplitude",
        "training_mseq_order",                "snr_db",         "trials",
        "seed",            "coupling_samples","self_samples",   "mi_mode",
        "mseq_order",      "workers",
    };

    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    std::set<std::string> seen;
    bool training_amp_set = false, training_order_set = false;

    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            diags.push_back({true, line_no, "expected `key = value`, got `" + line + "`"});
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!known.count(key)) {
            diags.push_back({true, line_no, "unknown key `" + key + "`"});
            continue;
        }
        if (!seen.insert(key).second) {
            diags.push_back({true, line_no, "duplicate key `" + key + "`"});
            continue;
        }
        if (value.empty()) {
            diags.push_back({true, line_no, "empty value for `" + key + "`"});
            continue;
        }

        auto bad = [&](const std::string& what) {
            diags.push_back({true, line_no, "invalid " + what + " for `" + key + "`: " + value});
        };

        if (key == "experiment") {
            cfg.experiment = value;
        } else if (key == "scheme") {
            if (value == "both")
                cfg.schemes = {"tr", "ar"};
            else if (value == "tr" || value == "ar")
                cfg.schemes = {value};
            else
                bad("scheme (tr | ar | both)");
        } else if (key == "channel") {
            cfg.channel = value;
        } else if (key == "N") {
            long v;
            if (parse_long(value, v) && v >= 1)
                cfg.chips = static_cast<int>(v);
            else
                bad("positive integer");
        } else if (key == "iota") {
            long v;
            if (parse_long(value, v))
                cfg.impulsiveness = static_cast<int>(v);
            else
                bad("integer");
        } else if (key == "T_c") {
            if (!parse_double(value, cfg.chip_period_s))
                bad("duration in seconds");
        } else if (key == "T_d") {
            if (!parse_double(value, cfg.delay_spread_s))
                bad("duration in seconds");
        } else if (key == "symbol_energy") {
            if (!parse_double(value, cfg.symbol_energy))
                bad("number");
        } else if (key == "beta") {
            for (const auto& item : split_list(value)) {
                double v;
                if (parse_double(item, v))
                    cfg.beta.push_back(v);
                else
                    bad("number list");
            }
        } else if (key == "K") {
            for (const auto& item : split_list(value)) {
                long v;
                if (parse_long(item, v))
                    cfg.users.push_back(v);
                else
                    bad("integer list");
            }
        } else if (key == "sigma_xi2") {
            for (const auto& item : split_list(value)) {
                double v;
                if (parse_double(item, v))
                    cfg.sigma_xi2.push_back(v);
                else
                    bad("number list");
            }
        } else if (key == "training_amplitude") {
            if (parse_double(value, cfg.training_amplitude))
                training_amp_set = true;
            else
                bad("number");
        } else if (key == "training_mseq_order") {
            long v;
            if (parse_long(value, v)) {
                cfg.training_mseq_order = static_cast<int>(v);
                training_order_set = true;
            } else {
                bad("integer");
            }
        } else if (key == "snr_db") {
            for (const auto& item : split_list(value)) {
                double v;
                if (parse_double(item, v))
                    cfg.snr_db.push_back(v);
                else
                    bad("number list");
            }
        } else if (key == "trials") {
            if (!parse_long(value, cfg.trials))
                bad("integer");
        } else if (key == "seed") {
            unsigned long long v;
            auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
            if (ec == std::errc() && p == value.data() + value.size())
                cfg.seed = v;
            else
                bad("unsigned integer");
        } else if (key == "coupling_samples") {
            if (!parse_long(value, cfg.coupling_samples))
                bad("integer");
        } else if (key == "self_samples") {
            if (!parse_long(value, cfg.self_samples))
                bad("integer");
        } else if (key == "mi_mode") {
            if (value == "asymptotic" || value == "finite")
                cfg.mi_mode = value;
            else
                bad("mode (asymptotic | finite)");
        } else if (key == "mseq_order") {
            long v;
            if (parse_long(value, v))
                cfg.mseq_order = static_cast<int>(v);
            else
                bad("integer");
        } else if (key == "workers") {
            long v;
            if (parse_long(value, v) && v >= 1)
                cfg.workers = static_cast<int>(v);
            else
                bad("positive integer");
        }
    }

    cfg.training_budget = training_amp_set || training_order_set;
    if (cfg.schemes.empty())
        cfg.schemes = {"tr", "ar"};
    return cfg;
}

RunConfig load_run_config(const std::string& path, std::vector<Diagnostic>& diags)
{
    std::ifstream in(path);
    if (!in) {
        diags.push_back({true, 0, "cannot open config file: " + path});
        return {};
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str(), diags);
}

std::vector<Diagnostic> validate(const RunConfig& cfg)
{
    std::vector<Diagnostic> diags;
    auto fatal = [&](const std::string& m) { diags.push_back({true, 0, m}); };
    auto warn = [&](const std::string& m) { diags.push_back({false, 0, m}); };

    static const std::set<std::string> experiments = {"ber", "equivalence", "coupling", "mi",
                                                      "estimation"};
    if (!experiments.count(cfg.experiment))
        fatal("experiment must be one of ber | equivalence | coupling | mi | estimation");

    if (cfg.impulsiveness < 1)
        fatal("iota must be >= 1");
    if (cfg.chips < 1)
        fatal("N must be >= 1");
    if (!(cfg.chip_period_s > 0.0))
        fatal("T_c must be positive");
    if (!(cfg.delay_spread_s > 0.0))
        fatal("T_d must be positive");
    if (!(cfg.symbol_energy >= 0.0))
        fatal("symbol_energy must be >= 0");
    if (cfg.trials < 1)
        fatal("trials must be >= 1");
    if (cfg.coupling_samples < 1 || cfg.self_samples < 1)
        fatal("sample counts must be >= 1");

    try {
        channel_preset(cfg.channel);
    } catch (const std::exception& e) {
        fatal(e.what());
    }

    if (!cfg.beta.empty() && !cfg.users.empty())
        fatal("give either beta or K, not both");
    for (long k : cfg.users)
        if (k < 1)
            fatal("K must be >= 1");
    for (double b : cfg.beta) {
        if (b < 0.0)
            fatal("beta must be >= 0");
        else if (b > 1.0)
            warn("beta > 1 is unusual (more users than chips)");
    }
    for (double s : cfg.sigma_xi2)
        if (s < 0.0)
            fatal("sigma_xi2 must be >= 0");

    if (cfg.training_budget && !cfg.sigma_xi2.empty())
        fatal("give either sigma_xi2 or a training budget "
              "(training_amplitude / training_mseq_order), not both");
    if (cfg.training_budget) {
        if (!(cfg.training_amplitude > 0.0))
            fatal("training_amplitude must be positive");
        if (cfg.training_mseq_order < 2 || cfg.training_mseq_order > 20)
            fatal("training_mseq_order must be in 2..20");
    }

    const bool needs_snr = cfg.experiment == "ber" || cfg.experiment == "equivalence" ||
                           cfg.experiment == "mi" || cfg.experiment == "estimation";
    if (needs_snr && cfg.snr_db.empty())
        fatal("snr_db list required for this experiment");
    for (double s : cfg.snr_db)
        if (!std::isfinite(s))
            fatal("snr_db values must be finite");

    if (!cfg.beta.empty() && !cfg.sigma_xi2.empty() && cfg.beta.size() != cfg.sigma_xi2.size() &&
        cfg.beta.size() != 1 && cfg.sigma_xi2.size() != 1)
        fatal("beta and sigma_xi2 lists must zip: equal lengths or a single value");

    if (cfg.experiment == "mi" && cfg.mi_mode == "finite" && cfg.beta.empty() &&
        cfg.users.empty())
        fatal("finite-mode mi needs K or beta");
    if (cfg.experiment == "estimation" &&
        (cfg.mseq_order < 2 || cfg.mseq_order > 20))
        fatal("mseq_order must be in 2..20");

    const int l_chips = cfg.channel_chips();
    if (cfg.chips < 2 * l_chips)
        warn("N < 2L: overlap statistics deviate from the sparse-regime model");

    return diags;
}

bool has_fatal(const std::vector<Diagnostic>& diags)
{
    return std::any_of(diags.begin(), diags.end(),
                       [](const Diagnostic& d) { return d.fatal; });
}

std::string RunConfig::resolved_text() const
{
    std::ostringstream os;
    os << "experiment = " << experiment << '\n';
    std::string scheme_text;
    if (schemes.size() == 2)
        scheme_text = "both";
    else if (!schemes.empty())
        scheme_text = schemes.front();
    os << "scheme = " << scheme_text << '\n';
    os << "channel = " << channel << '\n';
    os << "N = " << chips << '\n';
    os << "iota = " << impulsiveness << '\n';
    os << "T_c = " << format_double(chip_period_s) << '\n';
    os << "T_d = " << format_double(delay_spread_s) << '\n';
    os << "symbol_energy = " << format_double(symbol_energy) << '\n';
    auto list = [&](const char* key, const auto& values) {
        if (values.empty())
            return;
        os << key << " = ";
        for (std::size_t i = 0; i < values.size(); ++i)
            os << (i ? "," : "") << format_double(static_cast<double>(values[i]));
        os << '\n';
    };
    list("beta", beta);
    list("K", users);
    list("sigma_xi2", sigma_xi2);
    if (training_budget) {
        os << "training_amplitude = " << format_double(training_amplitude) << '\n';
        os << "training_mseq_order = " << training_mseq_order << '\n';
    }
    list("snr_db", snr_db);
    os << "trials = " << trials << '\n';
    os << "seed = " << seed << '\n';
    if (experiment == "mi" || experiment == "coupling") {
        os << "coupling_samples = " << coupling_samples << '\n';
        os << "self_samples = " << self_samples << '\n';
    }
    if (experiment == "mi")
        os << "mi_mode = " << mi_mode << '\n';
    if (experiment == "estimation")
        os << "mseq_order = " << mseq_order << '\n';
    return os.str();
}

} // namespace uwbsim

// SPDX-License-Identifier: Apache-2.0
//
// nfx: near-field spatial-domain channel extrapolation for XL-MIMO arrays
// Copyright (C) 2026 The nfx Authors
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

// Command-line front end of the experiment harness.

#include <nfx/harness/runner.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

struct CommonOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<int> trials;
    std::string snr, eta, alpha, algorithms, patterns, summary;
    std::vector<std::string> settings;
    bool timing = false;
};

void add_common(CLI::App* app, CommonOptions& o) {
    app->add_option("--config", o.config, "key = value configuration file")->check(CLI::ExistingFile);
    app->add_option("--seed", o.seed, "master seed");
    app->add_option("--out", o.out, "output CSV path ('-' for stdout)");
    app->add_option("--trials", o.trials, "Monte-Carlo trials per grid point")->check(CLI::PositiveNumber);
    app->add_option("--snr", o.snr, "SNR grid in dB, comma separated");
    app->add_option("--eta", o.eta, "compression rates, comma separated");
    app->add_option("--alpha", o.alpha, "cross-validation ratios, comma separated");
    app->add_option("--algorithms", o.algorithms, "algorithm list, comma separated");
    app->add_option("--patterns", o.patterns, "pattern kinds (du, sc, sr, cmr), comma separated");
    app->add_option("--set", o.settings, "extra key=value setting, repeatable");
    app->add_flag("--timing", o.timing, "record wall-clock time per algorithm call");
}

void apply_kv(nfx::ExperimentConfig& c, const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
    nfx::apply_setting(c, kv.substr(0, eq), kv.substr(eq + 1));
}

nfx::ExperimentConfig resolve(nfx::ExperimentKind kind, const CommonOptions& o) {
    auto c = nfx::default_experiment(kind);
    if (!o.config.empty()) nfx::load_config_file(c, o.config);
    if (o.seed) c.seed = *o.seed;
    if (!o.out.empty()) c.out = o.out;
    if (o.trials) c.trials = *o.trials;
    if (!o.snr.empty()) nfx::apply_setting(c, "snr_db", o.snr);
    if (!o.eta.empty()) nfx::apply_setting(c, "eta", o.eta);
    if (!o.alpha.empty()) nfx::apply_setting(c, "alpha", o.alpha);
    if (!o.algorithms.empty()) nfx::apply_setting(c, "algorithms", o.algorithms);
    if (!o.patterns.empty()) nfx::apply_setting(c, "patterns", o.patterns);
    if (!o.summary.empty()) c.summary_out = o.summary;
    for (const auto& kv : o.settings) apply_kv(c, kv);
    if (o.timing) c.timing = true;
    c.validate();
    return c;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file '" + path + "'");
    os << text;
}

int run_patterns(const CommonOptions& o, int count, const std::string& validate) {
    auto c = resolve(nfx::ExperimentKind::PatternNmse, o);
    if (o.patterns.empty()) c.patterns = nfx::default_experiment(nfx::ExperimentKind::PatternNmse).patterns;
    if (!validate.empty()) {
        std::ifstream in(validate);
        if (!in) throw std::runtime_error("cannot open pattern file '" + validate + "'");
        std::string line;
        int n = 0, lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty() || line[0] == '#') continue;
            try {
                const auto p = nfx::parse_pattern(line, c.system.antennas);
                if (!o.eta.empty() && c.eta.size() == 1 && p.size() != c.system.antennas / c.eta.front())
                    throw std::invalid_argument("pattern has " + std::to_string(p.size()) + " entries, expected " +
                                                std::to_string(c.system.antennas / c.eta.front()));
            } catch (const std::invalid_argument& e) {
                throw std::invalid_argument(validate + ":" + std::to_string(lineno) + ": " + e.what());
            }
            ++n;
        }
        std::cout << "ok: " << n << " valid pattern(s)\n";
        return 0;
    }
    const auto dict = nfx::build_dictionary(c.system, c.dictionary);
    std::ostringstream os;
    os << "# antenna indices are 0-based; one pattern per line\n";
    for (int eta : c.eta) {
        const auto sys = nfx::harness::with_compression(c.system, eta);
        for (auto kind : c.patterns) {
            const int draws = nfx::harness::is_random(kind) ? count : 1;
            for (int d = 0; d < draws; ++d) {
                const auto p = nfx::harness::make_pattern(kind, sys, dict, c, d);
                os << "# kind=" << nfx::to_string(kind) << " eta=" << eta << " draw=" << d
                   << " coherence=" << nfx::csv::format_number(nfx::mutual_coherence(dict, p)) << '\n'
                   << nfx::format_pattern(p) << '\n';
            }
        }
    }
    emit(c.out, os.str());
    return 0;
}

int run_dict(const CommonOptions& o) {
    const auto c = resolve(nfx::ExperimentKind::PatternNmse, o);
    const auto dict = nfx::build_dictionary(c.system, c.dictionary);
    nfx::csv::Table t({"column", "angle_index", "ring", "sin_angle", "curvature", "distance_m"});
    for (int p = 0; p < dict.size(); ++p) {
        const auto g = dict.grid_point(p);
        t.add({std::to_string(p), std::to_string(g.angle), std::to_string(g.ring),
               nfx::csv::format_number(dict.sin_angle(p)), nfx::csv::format_number(dict.curvature(p)),
               nfx::csv::format_number(dict.distance(p))});
    }
    emit(c.out, t.str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nfx: near-field channel extrapolation experiments"};
    app.require_subcommand(1);

    CommonOptions opts;
    std::vector<std::pair<CLI::App*, nfx::ExperimentKind>> experiments;
    for (auto kind : nfx::all_experiment_kinds()) {
        auto* sub = app.add_subcommand(nfx::to_string(kind), "run the " + std::string(nfx::to_string(kind)) +
                                                                 " experiment");
        add_common(sub, opts);
        if (kind == nfx::ExperimentKind::CvSweep)
            sub->add_option("--summary", opts.summary, "accuracy/efficiency summary CSV path");
        experiments.emplace_back(sub, kind);
    }

    int count = 1;
    std::string validate;
    auto* patterns = app.add_subcommand("patterns", "emit or validate antenna selection patterns");
    add_common(patterns, opts);
    patterns->add_option("--count", count, "draws per random pattern kind")->check(CLI::PositiveNumber);
    patterns->add_option("--validate", validate, "check a pattern file instead of generating");
    auto* dict = app.add_subcommand("dict", "emit polar dictionary grid metadata as CSV");
    add_common(dict, opts);

    CLI11_PARSE(app, argc, argv);
    try {
        if (patterns->parsed()) return run_patterns(opts, count, validate);
        if (dict->parsed()) return run_dict(opts);
        for (auto& [sub, kind] : experiments) {
            if (!sub->parsed()) continue;
            const auto cfg = resolve(kind, opts);
            const auto result = nfx::run_experiment(cfg);
            nfx::write_table(result.rows, cfg.out);
            if (result.summary) nfx::write_table(*result.summary, nfx::summary_path(cfg));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

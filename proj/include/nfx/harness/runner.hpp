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

#pragma once

// Seeded Monte-Carlo experiments. Every random draw comes from a stream
// derived from (master seed, stream tag, grid coordinates, trial), so a grid
// point produces the same numbers whether it runs alone or inside a sweep.
// Channels are scaled to ||H||_F^2 = N M, which makes SNR = 1 / sigma^2.

#include "../extrapolation/refine.hpp"
#include "../metrics.hpp"
#include "../random.hpp"
#include "experiment_config.hpp"
#include "result_row.hpp"

#include <bit>
#include <fstream>
#include <iostream>
#include <tuple>

namespace nfx {

namespace harness {

enum Stream : std::uint64_t { ScenarioStream = 0x51, PatternStream = 0x52, NoiseStream = 0x53 };

inline std::uint64_t key(double x) { return std::bit_cast<std::uint64_t>(x); }
inline std::uint64_t key(int x) { return static_cast<std::uint64_t>(static_cast<std::int64_t>(x)); }

inline SystemConfig with_compression(const SystemConfig& s, int eta) {
    SystemConfig out = s;
    out.compression = eta;
    out.validate();
    return out;
}

/// Ground-truth channel of one user in one trial, scaled to ||H||_F^2 = N M.
/// Independent of SNR and compression so sweeps share scenarios.
inline CMatrix trial_channel(const ExperimentConfig& c, int trial, int user = 0) {
    Rng rng(derive_seed(c.seed, {ScenarioStream, key(trial), key(user)}));
    const auto paths = sample_scenario(rng, c.paths, c.system, c.prior);
    CMatrix H = generate_channel(paths, c.system).entries;
    const double norm = H.norm();
    if (!(norm > 0.0)) throw std::runtime_error("trial_channel: zero channel");
    H *= std::sqrt(static_cast<double>(H.size())) / norm;
    return H;
}

/// Sparse random and coherence-minimizing patterns of the same draw share a
/// stream, so the latter always has the former among its candidates.
inline SelectionPattern make_pattern(PatternKind kind, const SystemConfig& sys, const PolarDictionary& dict,
                                     const ExperimentConfig& c, int draw) {
    switch (kind) {
    case PatternKind::DenseUniform: return dense_uniform(sys, c.dense_block);
    case PatternKind::SparseComb: return sparse_comb(sys, c.comb_offset);
    case PatternKind::SparseRandom:
    case PatternKind::CoherenceMinRandom: {
        Rng rng(derive_seed(c.seed, {PatternStream, key(sys.compression), key(draw)}));
        if (kind == PatternKind::SparseRandom) return sparse_random(sys, rng);
        return coherence_min_random(sys, dict, c.candidates, rng).pattern;
    }
    case PatternKind::Custom: break;
    }
    throw std::invalid_argument("make_pattern: custom patterns are not generated");
}

inline bool is_random(PatternKind k) { return k == PatternKind::SparseRandom || k == PatternKind::CoherenceMinRandom; }

/// Caches patterns by (kind, eta, draw); coherence searches dominate setup.
class PatternCache {
public:
    PatternCache(const ExperimentConfig& c, const PolarDictionary& dict) : c_(c), dict_(dict) {}

    const SelectionPattern& get(PatternKind kind, int eta, int trial) {
        const int draw = is_random(kind) && c_.pattern_per_trial ? trial : 0;
        const auto k = std::make_tuple(static_cast<int>(kind), eta, draw);
        auto it = cache_.find(k);
        if (it == cache_.end())
            it = cache_.emplace(k, make_pattern(kind, with_compression(c_.system, eta), dict_, c_, draw)).first;
        return it->second;
    }

private:
    const ExperimentConfig& c_;
    const PolarDictionary& dict_;
    std::map<std::tuple<int, int, int>, SelectionPattern> cache_;
};

inline MeasurementSet trial_measurement(const ExperimentConfig& c, const CMatrix& H, const SelectionPattern& pattern,
                                        double snr_db, int eta, int trial, int user = 0) {
    Rng rng(derive_seed(c.seed, {NoiseStream, key(snr_db), key(eta), key(trial), key(user)}));
    return observe(H, pattern, db_to_linear(-snr_db), rng, c.system.pilot_power);
}

inline bool uses_alpha(const std::string& algorithm) { return algorithm.rfind("cv_", 0) == 0; }

struct AlgorithmInput {
    const CMatrix& observed;
    const CMatrix& psi;
    const SelectionPattern& pattern;
    const PolarDictionary& dict;
    double sigma;
    double alpha;
};

inline RefineOptions refine_options(const ExperimentConfig& c) {
    RefineOptions r;
    r.iterations = c.refine_iterations;
    r.min_distance = c.dictionary.min_distance;
    return r;
}

inline ExtrapolationResult run_algorithm(const std::string& name, const AlgorithmInput& in,
                                         const ExperimentConfig& c) {
    const GreedyOptions greedy{c.max_atoms};
    const RefineOptions ref = refine_options(c);
    const auto eps = [&] {
        return residual_threshold(in.sigma, static_cast<int>(in.observed.rows()), static_cast<int>(in.observed.cols()));
    };
    if (name == "p_asomp") return p_asomp(in.observed, in.psi, in.dict, eps(), greedy);
    if (name == "cv_p_asomp") return cv_p_asomp(in.observed, in.psi, in.dict, in.sigma, in.alpha, greedy);
    if (name == "p_somp") return p_somp_fixed(in.observed, in.psi, in.dict, c.fixed_atoms);
    if (name == "p_asigw") return p_asigw(in.observed, in.psi, in.pattern, in.dict, eps(), ref, greedy);
    if (name == "cv_p_asigw")
        return cv_p_asigw(in.observed, in.psi, in.pattern, in.dict, in.sigma, in.alpha, ref, greedy);
    if (name == "p_sigw") {
        RefineOptions fixed = ref;
        fixed.iterations = c.fixed_refine_iterations;
        return p_sigw_fixed(in.observed, in.psi, in.pattern, in.dict, c.fixed_atoms, fixed);
    }
    throw std::invalid_argument("run_algorithm: unknown algorithm '" + name + "'");
}

inline std::optional<double> alpha_field(const std::string& algorithm, double alpha) {
    return uses_alpha(algorithm) ? std::optional<double>(alpha) : std::nullopt;
}

inline void fill_counters(ResultRow& row, const OpCounters& k, bool timing) {
    row.iterations = k.iterations + k.refine_iterations;
    row.correlation_ops = k.correlation_ops;
    row.total_ops = k.total_ops();
    if (timing) row.wall_ms = k.wall_ms;
}

/// Algorithm and alpha combinations of one trial, in output order.
inline std::vector<std::pair<std::string, double>> algorithm_runs(const ExperimentConfig& c) {
    std::vector<std::pair<std::string, double>> runs;
    for (const auto& a : c.algorithms) {
        if (uses_alpha(a))
            for (double alpha : c.alpha) runs.emplace_back(a, alpha);
        else
            runs.emplace_back(a, c.alpha.front());
    }
    return runs;
}

// pattern_nmse, nmse_vs_compression and complexity share one loop.
inline csv::Table run_sweep(const ExperimentConfig& c, const PolarDictionary& dict) {
    csv::Table table(ResultRow::header());
    PatternCache patterns(c, dict);
    const auto runs = algorithm_runs(c);
    for (int eta : c.eta)
        for (PatternKind kind : c.patterns)
            for (double snr : c.snr_db)
                for (int t = 0; t < c.trials; ++t) {
                    const CMatrix H = trial_channel(c, t);
                    const SelectionPattern& pattern = patterns.get(kind, eta, t);
                    const MeasurementSet meas = trial_measurement(c, H, pattern, snr, eta, t);
                    const CMatrix psi = sensing_matrix(dict, pattern);
                    const double sigma = std::sqrt(meas.noise_power);
                    for (const auto& [algo, alpha] : runs) {
                        const auto r = run_algorithm(algo, {meas.observed, psi, pattern, dict, sigma, alpha}, c);
                        ResultRow row;
                        row.experiment = to_string(c.kind);
                        row.algorithm = algo;
                        row.pattern_kind = to_string(kind);
                        row.snr_db = snr;
                        row.eta = eta;
                        row.alpha = alpha_field(algo, alpha);
                        row.trial = t;
                        row.nmse_db = nmse_db(H, r.reconstruction);
                        row.L_hat = r.path_count();
                        fill_counters(row, r.counters, c.timing);
                        table.add(row.fields());
                    }
                }
    return table;
}

inline csv::Table run_radiation_profile(const ExperimentConfig& c, const PolarDictionary& dict) {
    csv::Table table({"experiment", "pattern_kind", "eta", "draw", "sweep", "sin_angle", "distance_m", "profile"});
    for (int eta : c.eta) {
        const SystemConfig sys = with_compression(c.system, eta);
        for (PatternKind kind : c.patterns) {
            const int draws = is_random(kind) ? c.trials : 1;
            for (int draw = 0; draw < draws; ++draw) {
                const SelectionPattern pattern = make_pattern(kind, sys, dict, c, draw);
                auto emit = [&](const char* sweep, double s, double r) {
                    table.add({to_string(c.kind), to_string(kind), std::to_string(eta), std::to_string(draw), sweep,
                               csv::format_number(s), csv::format_number(r),
                               csv::format_number(radiation_profile(pattern, s, r, sys, c.reference_distance))});
                };
                for (int i = 0; i < c.profile_points; ++i)
                    emit("angle", -1.0 + 2.0 * i / c.profile_points, c.reference_distance);
                for (int i = 0; i < c.distance_points; ++i)
                    emit("distance", 0.0,
                         c.prior.min_distance +
                             (c.prior.max_distance - c.prior.min_distance) * i / (c.distance_points - 1));
            }
        }
    }
    return table;
}

/// Greedy stage of a refinement algorithm, used to start convergence traces.
inline ExtrapolationResult greedy_stage(const std::string& algo, const AlgorithmInput& in, const ExperimentConfig& c) {
    if (algo == "p_asigw") return run_algorithm("p_asomp", in, c);
    if (algo == "cv_p_asigw") return run_algorithm("cv_p_asomp", in, c);
    if (algo == "p_sigw") return run_algorithm("p_somp", in, c);
    throw std::invalid_argument("convergence: '" + algo + "' has no refinement stage");
}

inline csv::Table run_convergence(const ExperimentConfig& c, const PolarDictionary& dict) {
    csv::Table table(
        {"experiment", "algorithm", "line_search", "pattern_kind", "snr_db", "eta", "trial", "iteration", "objective"});
    PatternCache patterns(c, dict);
    const PatternKind kind = c.patterns.front();
    for (int eta : c.eta)
        for (double snr : c.snr_db)
            for (int t = 0; t < c.trials; ++t) {
                const CMatrix H = trial_channel(c, t);
                const SelectionPattern& pattern = patterns.get(kind, eta, t);
                const MeasurementSet meas = trial_measurement(c, H, pattern, snr, eta, t);
                const CMatrix psi = sensing_matrix(dict, pattern);
                const AlgorithmInput in{meas.observed, psi, pattern, dict, std::sqrt(meas.noise_power),
                                        c.alpha.front()};
                for (const auto& algo : c.algorithms) {
                    const auto init = greedy_stage(algo, in, c);
                    for (auto search : {LineSearchKind::StrongWolfe, LineSearchKind::Armijo}) {
                        RefineOptions opt = refine_options(c);
                        opt.iterations = c.convergence_iterations;
                        opt.search = search;
                        const auto r = refine(init, meas.observed, pattern, dict, opt);
                        for (std::size_t i = 0; i < r.objective_trace.size(); ++i)
                            table.add({to_string(c.kind), algo, to_string(search), to_string(kind),
                                       csv::format_number(snr), std::to_string(eta), std::to_string(t),
                                       std::to_string(i), csv::format_number(r.objective_trace[i])});
                    }
                }
            }
    return table;
}

/// Accuracy (1 - |e_full - e_cv| / e_full) x 100 on trial-mean linear NMSE,
/// efficiency t_min / t_alpha x 100 with t the trial-mean cost.
struct CvSummaryPoint {
    int eta;
    double snr_db;
    double alpha;
    int training;
    int validation;
    double nmse_full;
    double nmse_cv;
    double cost;
    double accuracy_pct() const { return (1.0 - std::abs(nmse_full - nmse_cv) / nmse_full) * 100.0; }
};

inline csv::Table cv_summary_table(const std::vector<CvSummaryPoint>& pts, bool timing) {
    csv::Table table({"experiment", "eta", "snr_db", "alpha", "training", "validation", "nmse_p_asomp_db",
                      "nmse_cv_p_asomp_db", "accuracy_pct", "cost", "efficiency_pct", "efficiency_basis"});
    for (const auto& p : pts) {
        double t_min = std::numeric_limits<double>::infinity();
        for (const auto& q : pts)
            if (q.eta == p.eta && q.snr_db == p.snr_db) t_min = std::min(t_min, q.cost);
        table.add({"cv_accuracy_efficiency", std::to_string(p.eta), csv::format_number(p.snr_db),
                   csv::format_number(p.alpha), std::to_string(p.training), std::to_string(p.validation),
                   csv::format_number(linear_to_db(p.nmse_full)), csv::format_number(linear_to_db(p.nmse_cv)),
                   csv::format_number(p.accuracy_pct()), csv::format_number(p.cost),
                   csv::format_number(t_min / p.cost * 100.0), timing ? "wall_ms" : "ops"});
    }
    return table;
}

struct CvSweepOutput {
    csv::Table rows;
    std::vector<CvSummaryPoint> summary;
};

inline CvSweepOutput run_cv_sweep(const ExperimentConfig& c, const PolarDictionary& dict) {
    CvSweepOutput out{csv::Table(ResultRow::header()), {}};
    PatternCache patterns(c, dict);
    const PatternKind kind = c.patterns.front();
    const auto runs = algorithm_runs(c);
    const bool summarize = std::count(c.algorithms.begin(), c.algorithms.end(), "p_asomp") &&
                           std::count(c.algorithms.begin(), c.algorithms.end(), "cv_p_asomp");
    for (int eta : c.eta)
        for (double snr : c.snr_db) {
            double full_sum = 0.0;
            std::vector<double> cv_sum(c.alpha.size(), 0.0), cost_sum(c.alpha.size(), 0.0);
            for (int t = 0; t < c.trials; ++t) {
                const CMatrix H = trial_channel(c, t);
                const SelectionPattern& pattern = patterns.get(kind, eta, t);
                const MeasurementSet meas = trial_measurement(c, H, pattern, snr, eta, t);
                const CMatrix psi = sensing_matrix(dict, pattern);
                const double sigma = std::sqrt(meas.noise_power);
                for (const auto& [algo, alpha] : runs) {
                    const auto r = run_algorithm(algo, {meas.observed, psi, pattern, dict, sigma, alpha}, c);
                    const double e = nmse(H, r.reconstruction);
                    ResultRow row;
                    row.experiment = to_string(c.kind);
                    row.algorithm = algo;
                    row.pattern_kind = to_string(kind);
                    row.snr_db = snr;
                    row.eta = eta;
                    row.alpha = alpha_field(algo, alpha);
                    row.trial = t;
                    row.nmse_db = linear_to_db(e);
                    row.L_hat = r.path_count();
                    fill_counters(row, r.counters, c.timing);
                    out.rows.add(row.fields());
                    if (algo == "p_asomp") full_sum += e;
                    if (algo == "cv_p_asomp") {
                        const auto i = static_cast<std::size_t>(
                            std::find(c.alpha.begin(), c.alpha.end(), alpha) - c.alpha.begin());
                        cv_sum[i] += e;
                        cost_sum[i] += c.timing ? r.counters.wall_ms : static_cast<double>(r.counters.total_ops());
                    }
                }
            }
            if (!summarize) continue;
            for (std::size_t i = 0; i < c.alpha.size(); ++i) {
                const CvSplit split = cv_split(c.system.subcarriers, c.alpha[i]);
                out.summary.push_back({eta, snr, c.alpha[i], split.training, split.validation(),
                                       full_sum / c.trials, cv_sum[i] / c.trials, cost_sum[i] / c.trials});
            }
        }
    return out;
}

inline csv::Table run_rate_vs_snr(const ExperimentConfig& c, const PolarDictionary& dict) {
    csv::Table table(ResultRow::header());
    PatternCache patterns(c, dict);
    const PatternKind kind = c.patterns.front();
    const auto runs = algorithm_runs(c);
    const int U = c.system.users;
    for (int eta : c.eta)
        for (double snr : c.snr_db)
            for (int t = 0; t < c.trials; ++t) {
                const SelectionPattern& pattern = patterns.get(kind, eta, t);
                const CMatrix psi = sensing_matrix(dict, pattern);
                std::vector<CMatrix> truth;
                std::vector<MeasurementSet> meas;
                for (int u = 0; u < U; ++u) {
                    truth.push_back(trial_channel(c, t, u));
                    meas.push_back(trial_measurement(c, truth.back(), pattern, snr, eta, t, u));
                }
                const double noise = db_to_linear(-snr);
                for (const auto& [algo, alpha] : runs) {
                    ResultRow row;
                    row.experiment = to_string(c.kind);
                    row.algorithm = algo;
                    row.pattern_kind = to_string(kind);
                    row.snr_db = snr;
                    row.eta = eta;
                    row.alpha = alpha_field(algo, alpha);
                    row.trial = t;
                    std::vector<CMatrix> estimates;
                    if (algo == "perfect_csi") {
                        estimates = truth;
                    } else {
                        OpCounters total;
                        std::int64_t paths = 0;
                        double nmse_sum = 0.0;
                        for (int u = 0; u < U; ++u) {
                            const auto r = run_algorithm(
                                algo, {meas[u].observed, psi, pattern, dict, std::sqrt(meas[u].noise_power), alpha}, c);
                            nmse_sum += nmse(truth[u], r.reconstruction);
                            paths += r.path_count();
                            total.iterations += r.counters.iterations;
                            total.refine_iterations += r.counters.refine_iterations;
                            total.correlation_ops += r.counters.correlation_ops;
                            total.ls_ops += r.counters.ls_ops;
                            total.refine_ops += r.counters.refine_ops;
                            total.wall_ms += r.counters.wall_ms;
                            estimates.push_back(r.reconstruction);
                        }
                        row.nmse_db = linear_to_db(nmse_sum / U);
                        row.L_hat = paths;
                        fill_counters(row, total, c.timing);
                    }
                    const RateContext ctx = make_rate_context(estimates, truth, noise, c.system.pilot_power);
                    double rate = 0.0;
                    bool available = true;
                    for (int u = 0; u < U && available; ++u) {
                        const auto r = achievable_rate(ctx, u);
                        available = r.has_value();
                        if (r) rate += *r;
                    }
                    if (available) row.rate_bps_hz = rate / U;
                    table.add(row.fields());
                }
            }
    return table;
}

} // namespace harness

struct ExperimentOutput {
    csv::Table rows;
    std::optional<csv::Table> summary; // cv_sweep only
};

/// Runs the configured experiment and returns its tables.
inline ExperimentOutput run_experiment(const ExperimentConfig& c) {
    c.validate();
    const PolarDictionary dict = build_dictionary(c.system, c.dictionary);
    switch (c.kind) {
    case ExperimentKind::RadiationProfile: return {harness::run_radiation_profile(c, dict), std::nullopt};
    case ExperimentKind::Convergence: return {harness::run_convergence(c, dict), std::nullopt};
    case ExperimentKind::CvSweep: {
        auto r = harness::run_cv_sweep(c, dict);
        std::optional<csv::Table> summary;
        if (!r.summary.empty()) summary = harness::cv_summary_table(r.summary, c.timing);
        return {std::move(r.rows), std::move(summary)};
    }
    case ExperimentKind::RateVsSnr: return {harness::run_rate_vs_snr(c, dict), std::nullopt};
    case ExperimentKind::PatternNmse:
    case ExperimentKind::NmseVsCompression:
    case ExperimentKind::Complexity: return {harness::run_sweep(c, dict), std::nullopt};
    }
    throw std::logic_error("run_experiment: unhandled experiment kind");
}

/// Path of the cv summary: explicit, else `out` with "_summary" before the
/// extension.
inline std::string summary_path(const ExperimentConfig& c) {
    if (!c.summary_out.empty()) return c.summary_out;
    if (c.out.empty() || c.out == "-") return "-";
    const auto dot = c.out.find_last_of('.');
    const auto slash = c.out.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return c.out + "_summary";
    return c.out.substr(0, dot) + "_summary" + c.out.substr(dot);
}

inline void write_table(const csv::Table& table, const std::string& path) {
    if (path.empty() || path == "-") {
        table.write(std::cout);
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file '" + path + "'");
    table.write(os);
    if (!os) throw std::runtime_error("failed writing '" + path + "'");
}

} // namespace nfx

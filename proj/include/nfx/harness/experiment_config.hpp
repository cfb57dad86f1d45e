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

// Experiment configuration: defaults per experiment kind, overridden by a
// flat "key = value" file and then by command-line settings. Lists are comma
// separated; '#' starts a comment.

#include "../antenna_selection.hpp"
#include "../channel_model.hpp"
#include "../polar_dictionary.hpp"
#include "csv.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <type_traits>
#include <map>

namespace nfx {

enum class ExperimentKind { RadiationProfile, PatternNmse, Convergence, CvSweep, RateVsSnr, NmseVsCompression, Complexity };

inline const char* to_string(ExperimentKind k) {
    switch (k) {
    case ExperimentKind::RadiationProfile: return "radiation_profile";
    case ExperimentKind::PatternNmse: return "pattern_nmse";
    case ExperimentKind::Convergence: return "convergence";
    case ExperimentKind::CvSweep: return "cv_sweep";
    case ExperimentKind::RateVsSnr: return "rate_vs_snr";
    case ExperimentKind::NmseVsCompression: return "nmse_vs_compression";
    case ExperimentKind::Complexity: return "complexity";
    }
    return "?";
}

inline const std::vector<ExperimentKind>& all_experiment_kinds() {
    static const std::vector<ExperimentKind> v{
        ExperimentKind::RadiationProfile, ExperimentKind::PatternNmse,       ExperimentKind::Convergence,
        ExperimentKind::CvSweep,          ExperimentKind::RateVsSnr,         ExperimentKind::NmseVsCompression,
        ExperimentKind::Complexity};
    return v;
}

inline std::optional<ExperimentKind> parse_experiment_kind(std::string_view s) {
    for (auto k : all_experiment_kinds())
        if (s == to_string(k)) return k;
    return std::nullopt;
}

/// Algorithm names understood by the harness.
inline const std::vector<std::string>& known_algorithms() {
    static const std::vector<std::string> v{"p_asomp", "cv_p_asomp", "p_somp", "p_asigw",
                                            "cv_p_asigw", "p_sigw", "perfect_csi"};
    return v;
}

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::PatternNmse;
    SystemConfig system;
    ScenarioPrior prior;
    DictionaryOptions dictionary;

    std::vector<double> snr_db{-10, -5, 0, 5, 10, 15};
    std::vector<int> eta{8};
    std::vector<double> alpha{0.3};
    std::vector<std::string> algorithms{"p_asomp"};
    std::vector<PatternKind> patterns{PatternKind::CoherenceMinRandom};

    int trials = 200;
    std::uint64_t seed = 1;
    std::string out;                // empty or "-" writes to stdout
    std::string summary_out;        // cv_sweep summary; empty derives from `out`

    int paths = 3;                  // L
    int candidates = 10;            // R
    int dense_block = 0;
    int comb_offset = 0;
    bool pattern_per_trial = true;  // false draws one random pattern per (kind, eta)

    int refine_iterations = 5;
    int fixed_refine_iterations = 10;
    int fixed_atoms = 6;            // L_fixed of the fixed-iteration baselines
    int max_atoms = 0;              // adaptive cap, 0 selects K / 2
    int convergence_iterations = 20;

    double reference_distance = 10.0; // R_min of the radiation profile
    int profile_points = 1024;      // angle sweep over [-1, 1)
    int distance_points = 141;      // distance sweep over [prior.min, prior.max]

    bool timing = false;            // fill wall_ms; off keeps output byte-identical

    void validate() const;
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    for (auto& item : csv::split(v)) {
        auto t = trim(item);
        if (!t.empty()) out.push_back(std::move(t));
    }
    return out;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw std::invalid_argument("config: '" + key + "' expects a boolean, got '" + v + "'");
}

template <class T>
T parse_scalar(const std::string& key, const std::string& v) {
    try {
        if constexpr (std::is_floating_point_v<T>) return static_cast<T>(csv::parse_double(v));
        else if constexpr (std::is_unsigned_v<T>) {
            char* end = nullptr;
            const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
            if (v.empty() || v[0] == '-' || end != v.c_str() + v.size()) throw std::invalid_argument(v);
            return static_cast<T>(x);
        } else {
            return static_cast<T>(csv::parse_int(v));
        }
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("config: bad value for '" + key + "': '" + v + "'");
    }
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& v) {
    std::vector<T> out;
    for (const auto& item : split_list(v)) out.push_back(parse_scalar<T>(key, item));
    return out;
}

} // namespace detail

/// Sets one configuration key; throws std::invalid_argument for unknown keys
/// or malformed values.
inline void apply_setting(ExperimentConfig& c, const std::string& key_in, const std::string& value_in) {
    using namespace detail;
    const std::string key = trim(key_in);
    const std::string v = trim(value_in);
    static const std::map<std::string, std::function<void(ExperimentConfig&, const std::string&)>> table{
        {"antennas", [](auto& c, auto& v) { c.system.antennas = parse_scalar<int>("antennas", v); }},
        {"subcarriers", [](auto& c, auto& v) { c.system.subcarriers = parse_scalar<int>("subcarriers", v); }},
        {"users", [](auto& c, auto& v) { c.system.users = parse_scalar<int>("users", v); }},
        {"carrier_hz", [](auto& c, auto& v) { c.system.carrier_hz = parse_scalar<double>("carrier_hz", v); }},
        {"bandwidth_hz", [](auto& c, auto& v) { c.system.bandwidth_hz = parse_scalar<double>("bandwidth_hz", v); }},
        {"spacing_m", [](auto& c, auto& v) { c.system.spacing_m = parse_scalar<double>("spacing_m", v); }},
        {"snr_db", [](auto& c, auto& v) { c.snr_db = parse_list<double>("snr_db", v); }},
        {"eta", [](auto& c, auto& v) { c.eta = parse_list<int>("eta", v); }},
        {"alpha", [](auto& c, auto& v) { c.alpha = parse_list<double>("alpha", v); }},
        {"algorithms", [](auto& c, auto& v) { c.algorithms = split_list(v); }},
        {"patterns",
         [](auto& c, auto& v) {
             c.patterns.clear();
             for (const auto& p : split_list(v)) {
                 const auto k = parse_pattern_kind(p);
                 if (!k || *k == PatternKind::Custom)
                     throw std::invalid_argument("config: unknown pattern kind '" + p + "'");
                 c.patterns.push_back(*k);
             }
         }},
        {"trials", [](auto& c, auto& v) { c.trials = parse_scalar<int>("trials", v); }},
        {"seed", [](auto& c, auto& v) { c.seed = parse_scalar<std::uint64_t>("seed", v); }},
        {"out", [](auto& c, auto& v) { c.out = v; }},
        {"summary_out", [](auto& c, auto& v) { c.summary_out = v; }},
        {"paths", [](auto& c, auto& v) { c.paths = parse_scalar<int>("paths", v); }},
        {"candidates", [](auto& c, auto& v) { c.candidates = parse_scalar<int>("candidates", v); }},
        {"dense_block", [](auto& c, auto& v) { c.dense_block = parse_scalar<int>("dense_block", v); }},
        {"comb_offset", [](auto& c, auto& v) { c.comb_offset = parse_scalar<int>("comb_offset", v); }},
        {"pattern_per_trial", [](auto& c, auto& v) { c.pattern_per_trial = parse_bool("pattern_per_trial", v); }},
        {"refine_iterations", [](auto& c, auto& v) { c.refine_iterations = parse_scalar<int>("refine_iterations", v); }},
        {"fixed_refine_iterations",
         [](auto& c, auto& v) { c.fixed_refine_iterations = parse_scalar<int>("fixed_refine_iterations", v); }},
        {"fixed_atoms", [](auto& c, auto& v) { c.fixed_atoms = parse_scalar<int>("fixed_atoms", v); }},
        {"max_atoms", [](auto& c, auto& v) { c.max_atoms = parse_scalar<int>("max_atoms", v); }},
        {"convergence_iterations",
         [](auto& c, auto& v) { c.convergence_iterations = parse_scalar<int>("convergence_iterations", v); }},
        {"reference_distance",
         [](auto& c, auto& v) { c.reference_distance = parse_scalar<double>("reference_distance", v); }},
        {"profile_points", [](auto& c, auto& v) { c.profile_points = parse_scalar<int>("profile_points", v); }},
        {"distance_points", [](auto& c, auto& v) { c.distance_points = parse_scalar<int>("distance_points", v); }},
        {"timing", [](auto& c, auto& v) { c.timing = parse_bool("timing", v); }},
        {"angles", [](auto& c, auto& v) { c.dictionary.angles = parse_scalar<int>("angles", v); }},
        {"rings", [](auto& c, auto& v) { c.dictionary.rings = parse_scalar<int>("rings", v); }},
        {"beta", [](auto& c, auto& v) { c.dictionary.beta = parse_scalar<double>("beta", v); }},
        {"rho_min", [](auto& c, auto& v) { c.dictionary.min_distance = parse_scalar<double>("rho_min", v); }},
        {"far_field_ring", [](auto& c, auto& v) { c.dictionary.far_field_ring = parse_bool("far_field_ring", v); }},
        {"min_distance", [](auto& c, auto& v) { c.prior.min_distance = parse_scalar<double>("min_distance", v); }},
        {"max_distance", [](auto& c, auto& v) { c.prior.max_distance = parse_scalar<double>("max_distance", v); }},
        {"reflect_min", [](auto& c, auto& v) { c.prior.reflect_min = parse_scalar<double>("reflect_min", v); }},
        {"reflect_max", [](auto& c, auto& v) { c.prior.reflect_max = parse_scalar<double>("reflect_max", v); }},
        {"scatter_min", [](auto& c, auto& v) { c.prior.scatter_min = parse_scalar<double>("scatter_min", v); }},
        {"scatter_max", [](auto& c, auto& v) { c.prior.scatter_max = parse_scalar<double>("scatter_max", v); }},
    };
    const auto it = table.find(key);
    if (it == table.end()) throw std::invalid_argument("config: unknown key '" + key + "'");
    it->second(c, v);
}

/// Applies "key=value" (or "key = value") lines from a stream.
inline void load_config(ExperimentConfig& c, std::istream& in, const std::string& origin = "config") {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (detail::trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": expected key = value");
        try {
            apply_setting(c, line.substr(0, eq), line.substr(eq + 1));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

inline void load_config_file(ExperimentConfig& c, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    load_config(c, in, path);
}

/// Grids and algorithm lists matching each experiment's protocol.
inline ExperimentConfig default_experiment(ExperimentKind kind) {
    ExperimentConfig c;
    c.kind = kind;
    const std::vector<PatternKind> all_patterns{PatternKind::DenseUniform, PatternKind::SparseComb,
                                                PatternKind::SparseRandom, PatternKind::CoherenceMinRandom};
    const std::vector<std::string> all_algorithms{"p_asomp", "cv_p_asomp", "p_somp", "p_asigw", "cv_p_asigw", "p_sigw"};
    switch (kind) {
    case ExperimentKind::RadiationProfile:
        c.eta = {8};
        c.patterns = all_patterns;
        c.trials = 20;
        break;
    case ExperimentKind::PatternNmse:
        c.eta = {8, 4};
        c.patterns = all_patterns;
        c.algorithms = {"p_asomp"};
        break;
    case ExperimentKind::Convergence:
        c.eta = {8, 4};
        c.snr_db = {10};
        c.algorithms = {"p_asigw"};
        c.trials = 50;
        break;
    case ExperimentKind::CvSweep:
        c.eta = {8, 4};
        c.snr_db = {0};
        c.alpha = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
        c.algorithms = {"p_asomp", "cv_p_asomp"};
        break;
    case ExperimentKind::RateVsSnr:
        c.eta = {4};
        c.algorithms = {"perfect_csi", "p_asomp", "cv_p_asomp", "p_somp", "p_asigw", "cv_p_asigw", "p_sigw"};
        break;
    case ExperimentKind::NmseVsCompression:
        c.snr_db = {5};
        c.eta = {2, 4, 8, 16};
        c.algorithms = all_algorithms;
        break;
    case ExperimentKind::Complexity:
        c.eta = {8, 4};
        c.algorithms = all_algorithms;
        break;
    }
    return c;
}

inline void ExperimentConfig::validate() const {
    using detail::require;
    system.validate();
    require(!snr_db.empty(), "config: snr_db grid is empty");
    require(!eta.empty(), "config: eta grid is empty");
    require(!alpha.empty(), "config: alpha grid is empty");
    require(!algorithms.empty(), "config: algorithm list is empty");
    require(!patterns.empty(), "config: pattern list is empty");
    require(trials >= 1, "config: trials must be >= 1");
    require(paths >= 1, "config: paths must be >= 1");
    require(candidates >= 1, "config: candidates must be >= 1");
    require(refine_iterations >= 0 && fixed_refine_iterations >= 0, "config: refinement iterations must be >= 0");
    require(fixed_atoms >= 1, "config: fixed_atoms must be >= 1");
    require(max_atoms >= 0, "config: max_atoms must be >= 0");
    require(convergence_iterations >= 1, "config: convergence_iterations must be >= 1");
    require(reference_distance > 0.0, "config: reference_distance must be positive");
    require(profile_points >= 2 && distance_points >= 2, "config: sweeps need at least two points");
    require(prior.min_distance > 0.0 && prior.max_distance >= prior.min_distance, "config: bad distance prior");
    require(prior.reflect_min > 0.0 && prior.reflect_max < 1.0 + 1e-12 && prior.reflect_min <= prior.reflect_max,
            "config: reflectivity interval must lie in (0, 1]");
    require(prior.scatter_min > 0.0 && prior.scatter_max < 1.0 + 1e-12 && prior.scatter_min <= prior.scatter_max,
            "config: scattering interval must lie in (0, 1]");
    for (int e : eta) {
        require(e >= 1 && system.antennas % e == 0, "config: every eta must divide the antenna count");
        require(dense_block < e && comb_offset < e && dense_block >= 0 && comb_offset >= 0,
                "config: dense_block and comb_offset must lie in [0, eta)");
    }
    for (double a : alpha) require(a > 0.0 && a < 1.0, "config: alpha values must lie in (0, 1)");
    for (const auto& a : algorithms)
        require(std::find(known_algorithms().begin(), known_algorithms().end(), a) != known_algorithms().end(),
                "config: unknown algorithm '" + a + "'");
    if (kind != ExperimentKind::RateVsSnr)
        for (const auto& a : algorithms)
            require(a != "perfect_csi", "config: perfect_csi is only meaningful for rate_vs_snr");
}

} // namespace nfx

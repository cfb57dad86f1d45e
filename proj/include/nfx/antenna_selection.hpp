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

#include "polar_dictionary.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <sstream>
#include <string_view>

namespace nfx {

enum class PatternKind { DenseUniform, SparseComb, SparseRandom, CoherenceMinRandom, Custom };

inline const char* to_string(PatternKind k) {
    switch (k) {
        case PatternKind::DenseUniform: return "dense_uniform";
        case PatternKind::SparseComb: return "sparse_comb";
        case PatternKind::SparseRandom: return "sparse_random";
        case PatternKind::CoherenceMinRandom: return "coherence_min_random";
        case PatternKind::Custom: return "custom";
    }
    return "?";
}

inline std::optional<PatternKind> parse_pattern_kind(std::string_view s) {
    for (auto k : {PatternKind::DenseUniform, PatternKind::SparseComb, PatternKind::SparseRandom,
                   PatternKind::CoherenceMinRandom, PatternKind::Custom})
        if (s == to_string(k)) return k;
    if (s == "du") return PatternKind::DenseUniform;
    if (s == "sc") return PatternKind::SparseComb;
    if (s == "sr") return PatternKind::SparseRandom;
    if (s == "cmr") return PatternKind::CoherenceMinRandom;
    return std::nullopt;
}

/// Ordered set of selected antennas, 0-based and strictly increasing.
class SelectionPattern {
public:
    SelectionPattern(std::vector<int> indices, int antennas, PatternKind kind = PatternKind::Custom)
        : idx_(std::move(indices)), antennas_(antennas), kind_(kind) {
        detail::require(!idx_.empty(), "SelectionPattern: empty pattern");
        for (std::size_t k = 0; k < idx_.size(); ++k) {
            if (idx_[k] < 0 || idx_[k] >= antennas_)
                throw std::out_of_range("SelectionPattern: antenna index out of range");
            if (k > 0 && idx_[k] <= idx_[k - 1])
                throw std::invalid_argument("SelectionPattern: indices must be strictly increasing");
        }
    }

    int size() const { return static_cast<int>(idx_.size()); }
    int antennas() const { return antennas_; }
    PatternKind kind() const { return kind_; }
    const std::vector<int>& indices() const { return idx_; }
    int operator[](int k) const { return idx_[k]; }

    bool operator==(const SelectionPattern& o) const { return idx_ == o.idx_ && antennas_ == o.antennas_; }

private:
    std::vector<int> idx_;
    int antennas_;
    PatternKind kind_;
};

/// Single-line comma-separated index list, e.g. "0,8,16".
inline std::string format_pattern(const SelectionPattern& p) {
    std::ostringstream os;
    for (int k = 0; k < p.size(); ++k) os << (k ? "," : "") << p[k];
    return os.str();
}

inline SelectionPattern parse_pattern(std::string_view line, int antennas) {
    std::vector<int> idx;
    std::string token;
    std::istringstream is{std::string(line)};
    while (std::getline(is, token, ',')) {
        const auto b = token.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) throw std::invalid_argument("parse_pattern: empty field");
        const auto e = token.find_last_not_of(" \t\r\n");
        std::size_t used = 0;
        const std::string t = token.substr(b, e - b + 1);
        const int v = std::stoi(t, &used);
        if (used != t.size()) throw std::invalid_argument("parse_pattern: malformed index '" + t + "'");
        idx.push_back(v);
    }
    return SelectionPattern(std::move(idx), antennas);
}

/// Contiguous block i of N/eta antennas.
inline SelectionPattern dense_uniform(const SystemConfig& cfg, int block) {
    cfg.validate();
    const int eta = cfg.compression;
    if (block < 0 || block >= eta) throw std::out_of_range("dense_uniform: block index outside 0..eta-1");
    const int K = cfg.selected();
    std::vector<int> idx(K);
    std::iota(idx.begin(), idx.end(), cfg.antennas * block / eta);
    return {std::move(idx), cfg.antennas, PatternKind::DenseUniform};
}

/// Every eta-th antenna starting at `offset`.
inline SelectionPattern sparse_comb(const SystemConfig& cfg, int offset) {
    cfg.validate();
    const int eta = cfg.compression;
    if (offset < 0 || offset >= eta) throw std::out_of_range("sparse_comb: offset outside 0..eta-1");
    std::vector<int> idx;
    for (int n = offset; n < cfg.antennas; n += eta) idx.push_back(n);
    return {std::move(idx), cfg.antennas, PatternKind::SparseComb};
}

/// K = N / eta distinct antennas drawn uniformly without replacement.
inline SelectionPattern sparse_random(const SystemConfig& cfg, Rng& rng) {
    cfg.validate();
    const int K = cfg.selected();
    if (K > cfg.antennas) throw std::invalid_argument("sparse_random: K exceeds N");
    std::vector<int> all(cfg.antennas);
    std::iota(all.begin(), all.end(), 0);
    std::vector<int> idx;
    idx.reserve(K);
    std::sample(all.begin(), all.end(), std::back_inserter(idx), K, rng);
    std::sort(idx.begin(), idx.end());
    return {std::move(idx), cfg.antennas, PatternKind::SparseRandom};
}

/// Rows of W picked by the pattern (Psi = A W without forming A).
inline CMatrix restrict_rows(const CMatrix& W, const SelectionPattern& pattern) {
    if (pattern.antennas() != W.rows())
        throw std::invalid_argument("restrict_rows: pattern does not match the array size");
    CMatrix out(pattern.size(), W.cols());
    for (int k = 0; k < pattern.size(); ++k) out.row(k) = W.row(pattern[k]);
    return out;
}

/// max_{q<p} |Psi_q^H Psi_p| with Psi the pattern's rows of W. Evaluated in
/// column blocks of `block` to bound the Gram-matrix footprint. Returns 0 for
/// a single-column dictionary.
inline double mutual_coherence(const CMatrix& W, const SelectionPattern& pattern, int block = 512) {
    const CMatrix psi = restrict_rows(W, pattern);
    const Eigen::Index P = psi.cols();
    if (P < 2) return 0.0;
    block = std::max(block, 1);
    double mu = 0.0;
    for (Eigen::Index b0 = 0; b0 < P; b0 += block) {
        const Eigen::Index nb = std::min<Eigen::Index>(block, P - b0);
        const Eigen::Index upto = b0 + nb;
        const CMatrix G = psi.leftCols(upto).adjoint() * psi.middleCols(b0, nb);
        for (Eigen::Index j = 0; j < nb; ++j) {
            const Eigen::Index p = b0 + j;
            for (Eigen::Index q = 0; q < p; ++q) mu = std::max(mu, std::abs(G(q, j)));
        }
    }
    return mu;
}

inline double mutual_coherence(const PolarDictionary& dict, const SelectionPattern& pattern, int block = 512) {
    return mutual_coherence(dict.matrix(), pattern, block);
}

/// The same coherence evaluated from the grid parameters as a sum of phase
/// differences over the selected antennas, without touching W. O(P^2 K);
/// meant for small dictionaries and cross-checks.
inline double mutual_coherence_phase_sum(const PolarDictionary& dict, const SelectionPattern& pattern) {
    const SystemConfig& cfg = dict.config();
    const double k = cfg.carrier_wavenumber();
    const double d = cfg.spacing();
    const int P = dict.size();
    std::vector<double> off(pattern.size());
    for (int i = 0; i < pattern.size(); ++i) off[i] = element_offset(pattern[i] + 1, cfg.antennas);
    double mu = 0.0;
    for (int p = 1; p < P; ++p) {
        const double sp = dict.sin_angle(p), kp = dict.curvature(p);
        for (int q = 0; q < p; ++q) {
            const double sq = dict.sin_angle(q), kq = dict.curvature(q);
            cplx acc{0.0, 0.0};
            for (double delta : off)
                acc += std::polar(1.0, -k * (delta * d * (sq - sp) + delta * delta * d * d * (kp - kq)));
            mu = std::max(mu, std::abs(acc));
        }
    }
    return mu;
}

struct CoherenceSearch {
    SelectionPattern pattern;
    double coherence;
    std::vector<double> candidate_coherence;
    int chosen;
};

/// Draws R sparse random patterns and keeps the least coherent one (first
/// occurrence on ties).
inline CoherenceSearch coherence_min_random(const SystemConfig& cfg, const PolarDictionary& dict, int candidates,
                                            Rng& rng) {
    if (candidates < 1) throw std::invalid_argument("coherence_min_random: need at least one candidate");
    std::vector<SelectionPattern> pool;
    std::vector<double> mu;
    pool.reserve(candidates);
    for (int r = 0; r < candidates; ++r) pool.push_back(sparse_random(cfg, rng));
    for (const auto& p : pool) mu.push_back(mutual_coherence(dict, p));
    const int best = static_cast<int>(std::min_element(mu.begin(), mu.end()) - mu.begin());
    SelectionPattern chosen(pool[best].indices(), cfg.antennas, PatternKind::CoherenceMinRandom);
    return {std::move(chosen), mu[best], std::move(mu), best};
}

/// |a^H(theta_s, r_s) a(0, R_min)| / ||a(theta_s, r_s)|| over the selected
/// antennas at f_c. With `normalized` the value is further divided by sqrt(K)
/// so the reference point scores exactly 1.
inline double radiation_profile(const SelectionPattern& pattern, double sin_angle, double distance,
                                const SystemConfig& cfg, double reference_distance = 10.0, bool normalized = true) {
    if (!(std::abs(sin_angle) <= 1.0)) throw std::invalid_argument("radiation_profile: |sin angle| must be <= 1");
    detail::require_distance(distance, "radiation_profile");
    detail::require_distance(reference_distance, "radiation_profile (reference)");
    const double k = cfg.carrier_wavenumber();
    const double d = cfg.spacing();
    const double kappa_s = (1.0 - sin_angle * sin_angle) / (2.0 * distance);
    const double kappa_ref = 1.0 / (2.0 * reference_distance);
    cplx acc{0.0, 0.0};
    for (int n : pattern.indices()) {
        const double delta = element_offset(n + 1, cfg.antennas);
        const double phi_s = -k * detail::path_difference(sin_angle, kappa_s, delta, d);
        const double phi_ref = -k * detail::path_difference(0.0, kappa_ref, delta, d);
        acc += std::polar(1.0, phi_ref - phi_s);
    }
    const double K = pattern.size();
    const double raw = std::abs(acc) / std::sqrt(K);
    return normalized ? raw / std::sqrt(K) : raw;
}

} // namespace nfx

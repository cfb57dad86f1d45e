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

// On-grid simultaneous OMP over the polar dictionary: the adaptive variant
// stops on a residual-power bound, the cross-validated variant correlates on
// a subset of subcarriers and stops on the rest, and the fixed variant runs a
// prescribed number of iterations.

#include "types.hpp"

namespace nfx {

struct GreedyOptions {
    int max_atoms = 0; // hard cap on |support|; 0 selects K / 2
};

namespace detail {

struct GreedyPlan {
    std::vector<int> correlate; // columns used for atom detection, empty = all
    std::vector<int> stopping;  // columns whose residual drives the stop rule, empty = all
    double threshold = 0.0;
    int max_atoms = 0;
    bool fixed = false;         // run exactly max_atoms iterations
};

inline void fill_on_grid_params(ExtrapolationResult& out, const PolarDictionary& dict, const CMatrix& coeffs) {
    out.params.sin_angles.clear();
    out.params.distances.clear();
    for (int p : out.support) {
        out.params.sin_angles.push_back(dict.sin_angle(p));
        out.params.distances.push_back(dict.distance(p));
    }
    out.params.gains = coeffs;
}

inline ExtrapolationResult greedy_pursuit(const CMatrix& Y, const CMatrix& psi, const PolarDictionary& dict,
                                          const GreedyPlan& plan) {
    if (psi.rows() != Y.rows()) throw std::invalid_argument("greedy pursuit: Y and Psi row counts differ");
    if (psi.cols() != dict.size()) throw std::invalid_argument("greedy pursuit: Psi does not match the dictionary");
    if (plan.threshold < 0.0) throw std::invalid_argument("greedy pursuit: threshold must be non-negative");
    Stopwatch clock;
    const Eigen::Index K = psi.rows();
    const Eigen::Index P = psi.cols();
    const Eigen::Index M = Y.cols();
    const int N = dict.config().antennas;

    auto stop_norm = [&](const CMatrix& R) {
        return plan.stopping.empty() ? R.norm() : gather_columns(R, plan.stopping).norm();
    };

    ExtrapolationResult out;
    out.reconstruction = CMatrix::Zero(N, M);
    out.params.gains.resize(0, M);

    if (!plan.fixed && stop_norm(Y) <= plan.threshold) {
        out.counters.wall_ms = clock.elapsed_ms();
        return out;
    }

    std::vector<char> used(static_cast<std::size_t>(P), 0);
    CMatrix R = Y;
    CMatrix coeffs;
    CMatrix chosen(K, 0);
    while (static_cast<Eigen::Index>(out.support.size()) < P) {
        if (plan.fixed && static_cast<int>(out.support.size()) >= plan.max_atoms) break;

        const CMatrix Rc = plan.correlate.empty() ? R : gather_columns(R, plan.correlate);
        const CMatrix E = psi.adjoint() * Rc;
        out.counters.correlation_ops += static_cast<std::int64_t>(P) * K * Rc.cols();
        const RVector energy = E.rowwise().squaredNorm();

        Eigen::Index best = -1;
        double best_energy = -1.0;
        for (Eigen::Index p = 0; p < P; ++p) {
            if (used[static_cast<std::size_t>(p)]) continue;
            if (energy(p) > best_energy) {
                best_energy = energy(p);
                best = p;
            }
        }
        used[static_cast<std::size_t>(best)] = 1;
        out.support.push_back(static_cast<int>(best));
        chosen.conservativeResize(K, chosen.cols() + 1);
        chosen.rightCols(1) = psi.col(best);

        const auto ls = least_squares(chosen, Y);
        coeffs = ls.coeffs;
        out.counters.rank_deficient = out.counters.rank_deficient || ls.rank_deficient;
        const std::int64_t L = chosen.cols();
        out.counters.ls_solves += 1;
        out.counters.ls_ops += L * L * K + 2 * L * K * M;
        R = Y - chosen * coeffs;
        out.residual_norms.push_back(stop_norm(R));
        out.counters.iterations += 1;

        if (!plan.fixed &&
            (out.residual_norms.back() <= plan.threshold || static_cast<int>(out.support.size()) >= plan.max_atoms))
            break;
    }

    CMatrix atoms(N, static_cast<Eigen::Index>(out.support.size()));
    for (std::size_t l = 0; l < out.support.size(); ++l)
        atoms.col(static_cast<Eigen::Index>(l)) = dict.matrix().col(out.support[l]);
    out.reconstruction = atoms * coeffs;
    fill_on_grid_params(out, dict, coeffs);
    out.counters.wall_ms = clock.elapsed_ms();
    return out;
}

inline int default_atom_cap(const CMatrix& psi, int requested) {
    return requested > 0 ? requested : std::max<int>(1, static_cast<int>(psi.rows()) / 2);
}

} // namespace detail

/// Adaptive simultaneous OMP: stops once ||R||_F <= threshold or the atom cap
/// is reached.
inline ExtrapolationResult p_asomp(const CMatrix& Y, const CMatrix& psi, const PolarDictionary& dict,
                                   double threshold, const GreedyOptions& opt = {}) {
    detail::GreedyPlan plan;
    plan.threshold = threshold;
    plan.max_atoms = detail::default_atom_cap(psi, opt.max_atoms);
    return detail::greedy_pursuit(Y, psi, dict, plan);
}

/// Cross-validated adaptive OMP. Atoms are detected on the training
/// subcarriers only; the stop rule uses the validation residual against
/// sigma * sqrt(K V).
inline ExtrapolationResult cv_p_asomp(const CMatrix& Y, const CMatrix& psi, const PolarDictionary& dict,
                                      double sigma, double ratio, const GreedyOptions& opt = {}) {
    const CvSplit split = cv_split(static_cast<int>(Y.cols()), ratio);
    detail::GreedyPlan plan;
    plan.correlate = split.train;
    plan.stopping = split.validate;
    plan.threshold = residual_threshold(sigma, static_cast<int>(Y.rows()), split.validation());
    plan.max_atoms = detail::default_atom_cap(psi, opt.max_atoms);
    return detail::greedy_pursuit(Y, psi, dict, plan);
}

/// Simultaneous OMP with a fixed iteration count.
inline ExtrapolationResult p_somp_fixed(const CMatrix& Y, const CMatrix& psi, const PolarDictionary& dict,
                                        int iterations) {
    if (iterations < 1) throw std::invalid_argument("p_somp_fixed: iteration count must be >= 1");
    detail::GreedyPlan plan;
    plan.max_atoms = iterations;
    plan.fixed = true;
    return detail::greedy_pursuit(Y, psi, dict, plan);
}

} // namespace nfx

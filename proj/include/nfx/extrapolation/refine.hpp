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

// Off-grid refinement of the greedy estimate. Path gains are eliminated by
// least squares, leaving the concentrated objective
//
//     L(s, u) = -||P(s, u) Y||_F^2,   P = Psi~ Psi~^+,
//
// over the sines s and inverse distances u = 1/r. Angles and inverse
// distances are updated alternately by line-searched gradient steps.

#include "greedy.hpp"
#include "line_search.hpp"

namespace nfx {

/// Concentrated least-squares objective over the selected antennas at f_c.
class SubspaceObjective {
public:
    struct Evaluation {
        double value = 0.0;          // -||P Y||^2
        double residual_energy = 0.0; // ||Y - Psi~ G||^2 = ||Y||^2 + value
        RVector grad_sin;             // dL / ds
        RVector grad_inv_distance;    // dL / du
        CMatrix gains;                // Psi~^+ Y
        bool rank_deficient = false;
    };

    SubspaceObjective(const CMatrix& Y, const SelectionPattern& pattern, const SystemConfig& cfg)
        : Y_(Y), k_(cfg.carrier_wavenumber()), d_(cfg.spacing()), energy_(Y.squaredNorm()) {
        if (Y.rows() != pattern.size()) throw std::invalid_argument("SubspaceObjective: Y rows must equal K");
        offsets_.resize(pattern.size());
        for (int i = 0; i < pattern.size(); ++i) offsets_(i) = element_offset(pattern[i] + 1, cfg.antennas);
    }

    int rows() const { return static_cast<int>(offsets_.size()); }
    const CMatrix& observations() const { return Y_; }
    double observation_energy() const { return energy_; }

    /// K x L responses of the selected antennas.
    CMatrix responses(const RVector& s, const RVector& u) const {
        check(s, u);
        CMatrix A(rows(), s.size());
        for (Eigen::Index l = 0; l < s.size(); ++l)
            for (int i = 0; i < rows(); ++i) A(i, l) = std::polar(1.0, phase(i, s(l), u(l)));
        return A;
    }

    Evaluation evaluate(const RVector& s, const RVector& u, bool with_gradient = true) const {
        const CMatrix A = responses(s, u);
        const auto ls = detail::least_squares(A, Y_);
        Evaluation e;
        e.gains = ls.coeffs;
        e.rank_deficient = ls.rank_deficient;
        const CMatrix R = Y_ - A * e.gains;
        e.residual_energy = R.squaredNorm();
        e.value = e.residual_energy - energy_;
        if (!with_gradient) return e;

        // dL = -2 Re tr(R^H dA G) for a full-column-rank A.
        const Eigen::Index L = s.size();
        e.grad_sin.resize(L);
        e.grad_inv_distance.resize(L);
        for (Eigen::Index l = 0; l < L; ++l) {
            CVector ds(rows()), du(rows());
            for (int i = 0; i < rows(); ++i) {
                const double delta = offsets_(i);
                const cplx ja = cplx(0.0, 1.0) * A(i, l);
                ds(i) = ja * (k_ * delta * d_ + k_ * delta * delta * d_ * d_ * s(l) * u(l));
                du(i) = ja * (-0.5 * k_ * delta * delta * d_ * d_ * (1.0 - s(l) * s(l)));
            }
            const CVector vs = R.adjoint() * ds;
            const CVector vu = R.adjoint() * du;
            e.grad_sin(l) = -2.0 * (vs.transpose() * e.gains.row(l).transpose())(0).real();
            e.grad_inv_distance(l) = -2.0 * (vu.transpose() * e.gains.row(l).transpose())(0).real();
        }
        return e;
    }

    /// -tr(Y^H P Y) with the projector formed explicitly; reference form of
    /// evaluate().value.
    double trace_form(const RVector& s, const RVector& u) const {
        const CMatrix A = responses(s, u);
        Eigen::CompleteOrthogonalDecomposition<CMatrix> cod;
        cod.setThreshold(1e-10);
        cod.compute(A);
        const CMatrix P = A * cod.pseudoInverse();
        return -(Y_.adjoint() * P * Y_).trace().real();
    }

    /// Complex multiply-accumulates of one evaluation under the counter model.
    std::int64_t cost(Eigen::Index paths, bool with_gradient) const {
        const std::int64_t K = rows(), M = Y_.cols(), L = paths;
        std::int64_t c = K * L + K * L * L + 3 * K * L * M;
        if (with_gradient) c += 2 * K * L * M + 2 * K * L;
        return c;
    }

private:
    void check(const RVector& s, const RVector& u) const {
        if (s.size() != u.size()) throw std::invalid_argument("SubspaceObjective: parameter sizes differ");
        if (s.size() == 0) throw std::invalid_argument("SubspaceObjective: no paths");
    }

    double phase(int i, double s, double u) const {
        const double delta = offsets_(i);
        return k_ * delta * d_ * s - 0.5 * k_ * delta * delta * d_ * d_ * (1.0 - s * s) * u;
    }

    CMatrix Y_;
    RVector offsets_;
    double k_;
    double d_;
    double energy_;
};

struct RefineOptions {
    int iterations = 5;
    double min_distance = 3.0;         // rho_min; r is clamped to [rho_min, inf)
    LineSearchKind search = LineSearchKind::StrongWolfe;
    LineSearchOptions line;            // initial_step is rescaled per search, see below
    double angle_trust = 0.0;          // largest first-trial move of any sine; 0 selects 1 / N
    double inverse_distance_trust = 0.0; // same for 1/r; 0 selects beta^2 lambda_c / D^2
    double far_field_factor = 10.0;    // planar atoms start at this many Rayleigh distances
};

namespace detail {

inline double projected(double x, double lo, double hi) { return std::clamp(x, lo, hi); }

struct AxisStep {
    bool moved = false;
    LineSearchResult search;
};

// One line-searched gradient step along a single block of coordinates,
// projected onto [lo, hi] per coordinate.
template <class Eval>
AxisStep axis_step(RVector& x, const RVector& grad, double f0, double lo, double hi, double trust,
                   const RefineOptions& opt, Eval&& eval_at) {
    AxisStep out;
    RVector dir = -grad;
    // Coordinates pinned at a bound with the descent pointing outward stay put.
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if ((x(i) <= lo && dir(i) < 0.0) || (x(i) >= hi && dir(i) > 0.0)) dir(i) = 0.0;
    const double slope0 = grad.dot(dir);
    const double scale = dir.cwiseAbs().maxCoeff();
    if (!(slope0 < 0.0) || !(scale > 0.0) || !std::isfinite(slope0)) return out;

    LineSearchOptions lo_opt = opt.line;
    lo_opt.initial_step = trust / scale;
    if (!std::isfinite(lo_opt.max_step)) lo_opt.max_step = 1e3 * lo_opt.initial_step;

    auto trial = [&](double a) {
        RVector t = x + a * dir;
        for (Eigen::Index i = 0; i < t.size(); ++i) t(i) = projected(t(i), lo, hi);
        return t;
    };
    auto phi = [&](double a, bool need_slope) {
        const RVector t = trial(a);
        auto [value, g] = eval_at(t, need_slope);
        double slope = 0.0;
        if (need_slope) {
            const RVector raw = x + a * dir;
            for (Eigen::Index i = 0; i < t.size(); ++i)
                if (raw(i) > lo && raw(i) < hi) slope += g(i) * dir(i);
        }
        return std::pair{value, slope};
    };
    out.search = line_search(opt.search, phi, f0, slope0, lo_opt);
    if (out.search.step > 0.0 && out.search.value < f0) {
        x = trial(out.search.step);
        out.moved = true;
    }
    return out;
}

} // namespace detail

/// Refines the support of a greedy result. With zero iterations the greedy
/// estimate is returned unchanged.
inline ExtrapolationResult refine(const ExtrapolationResult& init, const CMatrix& Y, const SelectionPattern& pattern,
                                  const PolarDictionary& dict, const RefineOptions& opt = {}) {
    if (opt.iterations < 0) throw std::invalid_argument("refine: iteration count must be >= 0");
    if (!(opt.min_distance > 0.0)) throw std::invalid_argument("refine: rho_min must be positive");
    ExtrapolationResult out = init;
    if (init.path_count() == 0 || opt.iterations == 0) return out;

    detail::Stopwatch clock;
    const SystemConfig& cfg = dict.config();
    const Eigen::Index L = init.path_count();
    const double u_max = 1.0 / opt.min_distance;
    const double D = cfg.aperture();
    const double angle_trust = opt.angle_trust > 0.0 ? opt.angle_trust : 1.0 / cfg.antennas;
    const double u_trust = opt.inverse_distance_trust > 0.0
                               ? opt.inverse_distance_trust
                               : dict.beta() * dict.beta() * cfg.wavelength() / (D * D);

    RVector s(L), u(L);
    for (Eigen::Index l = 0; l < L; ++l) {
        const int p = init.support[static_cast<std::size_t>(l)];
        s(l) = dict.sin_angle(p);
        const double r = dict.distance(p);
        if (std::isinf(r)) u(l) = 1.0 / (opt.far_field_factor * cfg.rayleigh_distance());
        else u(l) = r > 0.0 ? std::min(1.0 / r, u_max) : u_max;
    }

    const SubspaceObjective obj(Y, pattern, cfg);
    auto& ctr = out.counters;
    auto evaluate = [&](const RVector& ss, const RVector& uu, bool grad) {
        ctr.refine_ops += obj.cost(L, grad);
        ctr.line_search_evals += 1;
        return obj.evaluate(ss, uu, grad);
    };

    auto current = evaluate(s, u, true);
    out.objective_trace.assign(1, current.residual_energy);
    for (int it = 0; it < opt.iterations; ++it) {
        auto angle = detail::axis_step(s, current.grad_sin, current.value, -1.0, 1.0, angle_trust, opt,
                                       [&](const RVector& t, bool g) {
                                           auto e = evaluate(t, u, g);
                                           return std::pair{e.value, e.grad_sin};
                                       });
        if (angle.moved) current = evaluate(s, u, true);
        if (opt.search == LineSearchKind::StrongWolfe && angle.search.evaluations > 0 && !angle.search.curvature)
            ++ctr.curvature_fallbacks;

        auto dist = detail::axis_step(u, current.grad_inv_distance, current.value, 0.0, u_max, u_trust, opt,
                                      [&](const RVector& t, bool g) {
                                          auto e = evaluate(s, t, g);
                                          return std::pair{e.value, e.grad_inv_distance};
                                      });
        if (dist.moved) current = evaluate(s, u, true);
        if (opt.search == LineSearchKind::StrongWolfe && dist.search.evaluations > 0 && !dist.search.curvature)
            ++ctr.curvature_fallbacks;

        ctr.refine_iterations += 1;
        ctr.rank_deficient = ctr.rank_deficient || current.rank_deficient;
        out.objective_trace.push_back(current.residual_energy);
    }

    const int N = cfg.antennas;
    CMatrix B(N, L);
    out.params.sin_angles.assign(s.data(), s.data() + L);
    out.params.distances.resize(static_cast<std::size_t>(L));
    for (Eigen::Index l = 0; l < L; ++l) {
        B.col(l) = polar_response(s(l), 0.5 * (1.0 - s(l) * s(l)) * u(l), cfg.carrier_hz, cfg);
        out.params.distances[static_cast<std::size_t>(l)] =
            u(l) > 0.0 ? 1.0 / u(l) : std::numeric_limits<double>::infinity();
    }
    out.params.gains = current.gains;
    out.reconstruction = B * current.gains;
    ctr.refine_ops += static_cast<std::int64_t>(N) * L * Y.cols();
    ctr.wall_ms += clock.elapsed_ms();
    return out;
}

/// Adaptive greedy initialization followed by off-grid refinement.
inline ExtrapolationResult p_asigw(const CMatrix& Y, const CMatrix& psi, const SelectionPattern& pattern,
                                   const PolarDictionary& dict, double threshold, const RefineOptions& opt = {},
                                   const GreedyOptions& greedy = {}) {
    return refine(p_asomp(Y, psi, dict, threshold, greedy), Y, pattern, dict, opt);
}

/// Cross-validated greedy initialization followed by refinement on all
/// subcarriers.
inline ExtrapolationResult cv_p_asigw(const CMatrix& Y, const CMatrix& psi, const SelectionPattern& pattern,
                                      const PolarDictionary& dict, double sigma, double ratio,
                                      const RefineOptions& opt = {}, const GreedyOptions& greedy = {}) {
    return refine(cv_p_asomp(Y, psi, dict, sigma, ratio, greedy), Y, pattern, dict, opt);
}

/// Fixed-iteration greedy initialization followed by Armijo-only refinement.
inline ExtrapolationResult p_sigw_fixed(const CMatrix& Y, const CMatrix& psi, const SelectionPattern& pattern,
                                        const PolarDictionary& dict, int atoms, RefineOptions opt = {}) {
    opt.search = LineSearchKind::Armijo;
    return refine(p_somp_fixed(Y, psi, dict, atoms), Y, pattern, dict, opt);
}

} // namespace nfx

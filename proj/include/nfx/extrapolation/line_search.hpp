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

// Step-length selection along a descent direction. Both searches work on the
// 1-D restriction phi(step) = f(x + step * d) supplied as a callable
//
//     std::pair<double, double> phi(double step, bool need_slope);
//
// returning (value, slope); the slope may be left at 0 when need_slope is
// false.

#include "../config.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <utility>

namespace nfx {

enum class LineSearchKind { StrongWolfe, Armijo };

inline const char* to_string(LineSearchKind k) { return k == LineSearchKind::StrongWolfe ? "strong_wolfe" : "armijo"; }

struct LineSearchOptions {
    double c1 = 1e-4;
    double c2 = 0.9;
    double initial_step = 1.0;
    double max_step = std::numeric_limits<double>::infinity();
    double expansion = 2.0;   // Wolfe bracketing growth factor
    double backtrack = 0.5;   // Armijo contraction factor
    int max_evaluations = 30;
};

struct LineSearchResult {
    double step = 0.0;
    double value = 0.0;
    double slope = 0.0;
    bool sufficient_decrease = false;
    bool curvature = false;
    int evaluations = 0;
};

namespace detail {

inline void check_line_search(double slope0, const LineSearchOptions& o) {
    if (!(slope0 < 0.0)) throw std::invalid_argument("line search: direction is not a descent direction");
    if (!(o.c1 > 0.0 && o.c1 < 0.5 && o.c2 > o.c1 && o.c2 < 1.0))
        throw std::invalid_argument("line search: need 0 < c1 < 1/2 and c1 < c2 < 1");
    if (!(o.initial_step > 0.0)) throw std::invalid_argument("line search: initial step must be positive");
}

// Minimizer of the cubic matching value and slope at a and b, kept inside
// the middle 80% of the bracket; bisection when the cubic is unusable.
inline double cubic_step(double a, double fa, double ga, double b, double fb, double gb) {
    const double lo = std::min(a, b), hi = std::max(a, b);
    const double margin = 0.1 * (hi - lo);
    const double d1 = ga + gb - 3.0 * (fa - fb) / (a - b);
    const double disc = d1 * d1 - ga * gb;
    double t = 0.5 * (a + b);
    if (disc >= 0.0) {
        const double d2 = std::copysign(std::sqrt(disc), b - a);
        const double denom = gb - ga + 2.0 * d2;
        if (denom != 0.0) {
            const double c = b - (b - a) * (gb + d2 - d1) / denom;
            if (std::isfinite(c)) t = c;
        }
    }
    return std::clamp(t, lo + margin, hi - margin);
}

} // namespace detail

/// Bracketing-and-zoom search for a step satisfying the sufficient decrease
/// and strong curvature conditions. When the evaluation budget runs out the
/// best step seen that satisfies sufficient decrease is returned with
/// `curvature == false`; if there is none, the step is 0.
template <class Phi>
LineSearchResult strong_wolfe_search(Phi&& phi, double f0, double g0, const LineSearchOptions& o = {}) {
    detail::check_line_search(g0, o);
    int evals = 0;
    LineSearchResult best{0.0, f0, g0, false, false, 0};

    auto armijo = [&](double a, double f) { return f <= f0 + o.c1 * a * g0; };
    auto curvature = [&](double g) { return std::abs(g) <= o.c2 * std::abs(g0); };
    auto probe = [&](double a) {
        auto [f, g] = phi(a, true);
        ++evals;
        if (armijo(a, f) && f < best.value) best = {a, f, g, true, false, 0};
        return std::pair{f, g};
    };
    auto done = [&](LineSearchResult r) {
        r.evaluations = evals;
        return r;
    };
    auto fallback = [&] { return done(best); };

    auto zoom = [&](double lo, double flo, double glo, double hi, double fhi, double ghi) {
        while (evals < o.max_evaluations) {
            if (std::abs(hi - lo) <= 1e-14 * std::max(1.0, std::abs(lo))) break;
            const double a = detail::cubic_step(lo, flo, glo, hi, fhi, ghi);
            const auto [f, g] = probe(a);
            if (!armijo(a, f) || f >= flo) {
                hi = a, fhi = f, ghi = g;
            } else {
                if (curvature(g)) return done({a, f, g, true, true, 0});
                if (g * (hi - lo) >= 0.0) hi = lo, fhi = flo, ghi = glo;
                lo = a, flo = f, glo = g;
            }
        }
        return fallback();
    };

    double a_prev = 0.0, f_prev = f0, g_prev = g0;
    double a = std::min(o.initial_step, o.max_step);
    while (evals < o.max_evaluations) {
        const auto [f, g] = probe(a);
        if (!armijo(a, f) || (evals > 1 && f >= f_prev)) return zoom(a_prev, f_prev, g_prev, a, f, g);
        if (curvature(g)) return done({a, f, g, true, true, 0});
        if (g >= 0.0) return zoom(a, f, g, a_prev, f_prev, g_prev);
        if (a >= o.max_step) break;
        a_prev = a, f_prev = f, g_prev = g;
        a = std::min(a * o.expansion, o.max_step);
    }
    return fallback();
}

/// Backtracking search enforcing sufficient decrease only.
template <class Phi>
LineSearchResult armijo_search(Phi&& phi, double f0, double g0, const LineSearchOptions& o = {}) {
    detail::check_line_search(g0, o);
    LineSearchResult r{0.0, f0, g0, false, false, 0};
    double a = std::min(o.initial_step, o.max_step);
    while (r.evaluations < o.max_evaluations) {
        const auto [f, g] = phi(a, false);
        ++r.evaluations;
        if (f <= f0 + o.c1 * a * g0) {
            r.step = a, r.value = f, r.slope = g, r.sufficient_decrease = true;
            return r;
        }
        a *= o.backtrack;
    }
    return r;
}

template <class Phi>
LineSearchResult line_search(LineSearchKind kind, Phi&& phi, double f0, double g0, const LineSearchOptions& o = {}) {
    return kind == LineSearchKind::StrongWolfe ? strong_wolfe_search(std::forward<Phi>(phi), f0, g0, o)
                                               : armijo_search(std::forward<Phi>(phi), f0, g0, o);
}

/// Vector form: searches along `direction` from `point` for an objective
/// f(x) with gradient grad(x).
inline LineSearchResult wolfe_step(const std::function<double(const RVector&)>& objective,
                                   const std::function<RVector(const RVector&)>& gradient, const RVector& point,
                                   const RVector& direction, const LineSearchOptions& o = {}) {
    const double f0 = objective(point);
    const double g0 = gradient(point).dot(direction);
    auto phi = [&](double a, bool need_slope) {
        const RVector x = point + a * direction;
        return std::pair{objective(x), need_slope ? gradient(x).dot(direction) : 0.0};
    };
    return strong_wolfe_search(phi, f0, g0, o);
}

} // namespace nfx

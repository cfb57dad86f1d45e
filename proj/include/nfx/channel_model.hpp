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

// Spherical-wave multipath channel synthesis for a uniform linear array.
//
// Antennas are indexed 1..N in the free functions that mirror the physical
// model (delta_n = (2n - N - 1) / 2); vectors are 0-based as usual.

#include "config.hpp"
#include "random.hpp"

#include <span>
#include <vector>

namespace nfx {

/// Centre frequency of subcarrier m, m in 1..M.
inline double subcarrier_frequency(const SystemConfig& cfg, int m) {
    if (m < 1 || m > cfg.subcarriers)
        throw std::out_of_range("subcarrier_frequency: index outside 1..M");
    const double M = cfg.subcarriers;
    return cfg.carrier_hz + (cfg.bandwidth_hz / M) * (m - 1 - (M - 1) / 2.0);
}

/// Offset of antenna n (1..N) from the array centre in units of d.
inline double element_offset(int n, int N) { return (2.0 * n - N - 1) / 2.0; }

namespace detail {

// r^(n) - r under the second-order expansion, written directly in terms of the
// sine and the curvature (1 - sin^2) / (2 r) so large r does not cancel.
inline double path_difference(double sin_angle, double curvature, double offset, double d) {
    return -offset * d * sin_angle + offset * offset * d * d * curvature;
}

inline void require_distance(double r, const char* who) {
    if (!(r > 0.0) || !std::isfinite(r))
        throw std::invalid_argument(std::string(who) + ": distance must be positive and finite");
}

} // namespace detail

/// Second-order (Fresnel) distance from the source to antenna n (1..N).
inline double antenna_distance(double angle_rad, double r, int n, const SystemConfig& cfg) {
    detail::require_distance(r, "antenna_distance");
    if (n < 1 || n > cfg.antennas) throw std::out_of_range("antenna_distance: antenna index outside 1..N");
    const double s = std::sin(angle_rad);
    return r + detail::path_difference(s, (1.0 - s * s) / (2.0 * r), element_offset(n, cfg.antennas),
                                       cfg.spacing());
}

/// Array response parameterized by sin(angle) and the wavefront curvature
/// kappa = (1 - sin^2) / (2 r). kappa = 0 is the planar (far-field) response.
/// Every dictionary atom and every refined path goes through this function.
inline CVector polar_response(double sin_angle, double curvature, double freq_hz, const SystemConfig& cfg) {
    if (!(freq_hz > 0.0)) throw std::invalid_argument("polar_response: frequency must be positive");
    const int N = cfg.antennas;
    const double k = 2.0 * pi * freq_hz / speed_of_light;
    const double d = cfg.spacing();
    CVector a(N);
    for (int n = 1; n <= N; ++n) {
        const double phase = -k * detail::path_difference(sin_angle, curvature, element_offset(n, N), d);
        a(n - 1) = std::polar(1.0, phase);
    }
    return a;
}

/// Near-field steering vector b(angle, r) at frequency f: entries
/// exp(-j k (r^(n) - r)).
inline CVector steering_vector(double angle_rad, double r, double freq_hz, const SystemConfig& cfg) {
    detail::require_distance(r, "steering_vector");
    const double s = std::sin(angle_rad);
    return polar_response(s, (1.0 - s * s) / (2.0 * r), freq_hz, cfg);
}

/// Amplitude correction r / r^(n).
inline RVector gain_correction(double angle_rad, double r, const SystemConfig& cfg) {
    detail::require_distance(r, "gain_correction");
    RVector c(cfg.antennas);
    for (int n = 1; n <= cfg.antennas; ++n) c(n - 1) = r / antenna_distance(angle_rad, r, n, cfg);
    return c;
}

enum class PathKind { LineOfSight, Reflected, Scattering };

inline const char* to_string(PathKind k) {
    switch (k) {
        case PathKind::LineOfSight: return "los";
        case PathKind::Reflected: return "reflected";
        case PathKind::Scattering: return "scattering";
    }
    return "?";
}

/// One propagation path.
///
/// `distance` is the distance that shapes the wavefront at the array: the LoS
/// range, the image-source range r_f1 + r_f2 of a reflection, or the
/// scatterer range r_s2. `pre_distance` is the user-side segment (r_f1 or
/// r_s1) and is unused for LoS.
struct PathComponent {
    PathKind kind = PathKind::LineOfSight;
    double angle_rad = 0.0;
    double distance = 1.0;
    double pre_distance = 0.0;
    cplx reflectivity{0.0, 0.0};

    double sin_angle() const { return std::sin(angle_rad); }

    void validate() const {
        detail::require_distance(distance, "PathComponent");
        if (kind == PathKind::LineOfSight) return;
        detail::require_distance(pre_distance, "PathComponent (pre-scatterer segment)");
        const double g = std::abs(reflectivity);
        if (!(g > 0.0 && g < 1.0))
            throw std::invalid_argument("PathComponent: |reflectivity| must lie in (0, 1)");
        if (kind == PathKind::Reflected && pre_distance >= distance)
            throw std::invalid_argument("PathComponent: reflected segment r_f1 must be shorter than r_f1 + r_f2");
    }
};

/// Complex path gain at frequency f.
inline cplx path_gain(const PathComponent& path, double freq_hz) {
    path.validate();
    if (!(freq_hz > 0.0)) throw std::invalid_argument("path_gain: frequency must be positive");
    const double lambda = speed_of_light / freq_hz;
    const double k = 2.0 * pi / lambda;
    switch (path.kind) {
        case PathKind::LineOfSight:
        case PathKind::Reflected: {
            // For a reflection `distance` already holds r_f1 + r_f2.
            const double r = path.distance;
            const cplx g = lambda * std::polar(1.0, -k * r) / (4.0 * pi * r);
            return path.kind == PathKind::Reflected ? path.reflectivity * g : g;
        }
        case PathKind::Scattering: {
            const double r1 = path.pre_distance;
            const double r2 = path.distance;
            return path.reflectivity * lambda * lambda * std::polar(1.0, -k * (r1 + r2)) /
                   (16.0 * pi * pi * r1 * r2);
        }
    }
    return {};
}

/// Ground-truth N x M channel together with the paths that produced it.
struct ChannelMatrix {
    CMatrix entries;
    std::vector<PathComponent> paths;
};

/// Column m is sum_l g_{l,m} c(angle_l, r_l) .* b_m(angle_l, r_l), evaluated at
/// the exact subcarrier frequency f_m.
inline ChannelMatrix generate_channel(std::span<const PathComponent> paths, const SystemConfig& cfg) {
    if (paths.empty()) throw std::invalid_argument("generate_channel: empty path list");
    cfg.validate();
    const int N = cfg.antennas;
    const int M = cfg.subcarriers;
    ChannelMatrix H{CMatrix::Zero(N, M), {paths.begin(), paths.end()}};
    for (const auto& p : paths) {
        p.validate();
        const RVector c = gain_correction(p.angle_rad, p.distance, cfg);
        for (int m = 1; m <= M; ++m) {
            const double f = subcarrier_frequency(cfg, m);
            const cplx g = path_gain(p, f);
            H.entries.col(m - 1) += g * (c.cast<cplx>().cwiseProduct(steering_vector(p.angle_rad, p.distance, f, cfg)));
        }
    }
    return H;
}

/// Priors for random scenario generation.
struct ScenarioPrior {
    double min_distance = 10.0;
    double max_distance = 80.0;
    double reflect_min = 0.5;    // |gamma_f| ~ U(reflect_min, reflect_max)
    double reflect_max = 1.0;
    double scatter_min = 0.1;    // |gamma_s| ~ U(scatter_min, scatter_max)
    double scatter_max = 0.5;
};

/// One LoS path, one reflected path, then scattering paths. Every segment
/// length is drawn from U(min_distance, max_distance), sin(angle) from
/// U(-1, 1), reflectivity phases from U(0, 2 pi).
inline std::vector<PathComponent> sample_scenario(Rng& rng, int path_count, const SystemConfig& cfg,
                                                  const ScenarioPrior& prior = {}) {
    if (path_count < 1) throw std::invalid_argument("sample_scenario: need at least one path");
    (void)cfg;
    std::vector<PathComponent> out;
    out.reserve(path_count);
    auto draw_distance = [&] { return uniform(rng, prior.min_distance, prior.max_distance); };
    for (int l = 0; l < path_count; ++l) {
        PathComponent p;
        p.angle_rad = std::asin(uniform(rng, -1.0, 1.0));
        if (l == 0) {
            p.kind = PathKind::LineOfSight;
            p.distance = draw_distance();
        } else {
            const bool reflected = (l == 1);
            p.kind = reflected ? PathKind::Reflected : PathKind::Scattering;
            const double seg1 = draw_distance();
            const double seg2 = draw_distance();
            p.pre_distance = seg1;
            p.distance = reflected ? seg1 + seg2 : seg2;
            const double mag = reflected ? uniform(rng, prior.reflect_min, prior.reflect_max)
                                         : uniform(rng, prior.scatter_min, prior.scatter_max);
            p.reflectivity = std::polar(mag, uniform(rng, 0.0, 2.0 * pi));
        }
        out.push_back(p);
    }
    return out;
}

} // namespace nfx

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

#include "channel_model.hpp"

#include <limits>

namespace nfx {

struct DictionaryOptions {
    int angles = 0;              // N_a; 0 selects N
    int rings = -1;              // N_d; negative selects default_ring_count()
    double beta = 1.5;
    double min_distance = 3.0;   // rho_min used by the default ring count
    bool far_field_ring = true;  // adds the r = infinity ring as ring 0
};

/// Number of distance rings needed so the closest broadside ring lies at or
/// below `min_distance`: ceil(D^2 / (2 beta^2 lambda_c rho_min)).
inline int default_ring_count(const SystemConfig& cfg, double beta, double min_distance) {
    detail::require(beta > 0.0 && min_distance > 0.0, "default_ring_count: beta and rho_min must be positive");
    const double D = cfg.aperture();
    return static_cast<int>(std::ceil(D * D / (2.0 * beta * beta * cfg.wavelength() * min_distance)));
}

/// Polar-domain dictionary over a uniform sine grid and a 1/r-uniform distance
/// grid.
///
/// Angle index a runs over 0..N_a-1 with sin = (2a - N_a) / N_a. Ring index
/// runs over 1..N_d, plus ring 0 (planar wavefront) when the far-field ring is
/// enabled. Ring n_d >= 1 sits at r = D^2 cos^2 / (2 beta^2 lambda_c n_d),
/// which is the same wavefront curvature n_d beta^2 lambda_c / D^2 for every
/// angle; atoms are generated from that curvature so the endfire column stays
/// finite.
class PolarDictionary {
public:
    PolarDictionary(const SystemConfig& cfg, int angles, int rings, double beta, bool far_field_ring)
        : cfg_(cfg), angles_(angles), rings_(rings), beta_(beta), far_(far_field_ring) {
        cfg.validate();
        detail::require(angles >= 2 && angles % 2 == 0, "PolarDictionary: N_a must be even and >= 2");
        detail::require(rings >= 0, "PolarDictionary: N_d must be >= 0");
        detail::require(beta > 0.0, "PolarDictionary: beta must be positive");
        detail::require(ring_slots() >= 1, "PolarDictionary: grid has no rings");
        sin_grid_.resize(angles_);
        for (int a = 0; a < angles_; ++a) sin_grid_[a] = (2.0 * a - angles_) / angles_;
        W_.resize(cfg.antennas, size());
        for (int p = 0; p < size(); ++p) W_.col(p) = compute_atom(p);
    }

    int angles() const { return angles_; }
    int rings() const { return rings_; }
    double beta() const { return beta_; }
    bool has_far_field_ring() const { return far_; }
    int size() const { return angles_ * ring_slots(); }
    int first_ring() const { return far_ ? 0 : 1; }
    const SystemConfig& config() const { return cfg_; }
    const CMatrix& matrix() const { return W_; }
    const std::vector<double>& angle_grid() const { return sin_grid_; }

    /// Column index of (angle a, ring n_d).
    int column_index(int a, int ring) const {
        if (a < 0 || a >= angles_ || ring < first_ring() || ring > rings_)
            throw std::out_of_range("PolarDictionary: grid index out of range");
        return (ring - first_ring()) * angles_ + a;
    }

    struct GridPoint {
        int angle;
        int ring;
    };

    GridPoint grid_point(int p) const {
        check_column(p);
        return {p % angles_, p / angles_ + first_ring()};
    }

    double sin_angle(int p) const { return sin_grid_[grid_point(p).angle]; }

    /// Wavefront curvature (1 - sin^2) / (2 r) of a column.
    double curvature(int p) const { return ring_curvature(grid_point(p).ring); }

    double ring_curvature(int ring) const {
        const double D = cfg_.aperture();
        return ring * beta_ * beta_ * cfg_.wavelength() / (D * D);
    }

    /// Grid distance of a column: infinity on the far-field ring, 0 at endfire.
    double distance(int p) const {
        const auto g = grid_point(p);
        if (g.ring == 0) return std::numeric_limits<double>::infinity();
        const double s = sin_grid_[g.angle];
        const double D = cfg_.aperture();
        return D * D * (1.0 - s * s) / (2.0 * beta_ * beta_ * cfg_.wavelength() * g.ring);
    }

    /// Stored column for (a, n_d).
    CVector atom(int a, int ring) const { return W_.col(column_index(a, ring)); }

private:
    int ring_slots() const { return rings_ + (far_ ? 1 : 0); }

    void check_column(int p) const {
        if (p < 0 || p >= size()) throw std::out_of_range("PolarDictionary: column out of range");
    }

    CVector compute_atom(int p) const {
        const auto g = grid_point(p);
        return polar_response(sin_grid_[g.angle], ring_curvature(g.ring), cfg_.carrier_hz, cfg_);
    }

    SystemConfig cfg_;
    int angles_;
    int rings_;
    double beta_;
    bool far_;
    std::vector<double> sin_grid_;
    CMatrix W_;
};

inline PolarDictionary build_dictionary(const SystemConfig& cfg, const DictionaryOptions& opt = {}) {
    const int na = opt.angles > 0 ? opt.angles : cfg.antennas;
    const int nd = opt.rings >= 0 ? opt.rings : default_ring_count(cfg, opt.beta, opt.min_distance);
    return PolarDictionary(cfg, na, nd, opt.beta, opt.far_field_ring);
}

inline PolarDictionary build_dictionary(const SystemConfig& cfg, int angles, int rings, double beta = 1.5,
                                        bool far_field_ring = true) {
    return PolarDictionary(cfg, angles, rings, beta, far_field_ring);
}

/// W * H_p.
inline CMatrix polar_to_spatial(const PolarDictionary& dict, const CMatrix& polar) {
    if (polar.rows() != dict.size())
        throw std::invalid_argument("polar_to_spatial: coefficient rows must equal dictionary size");
    return dict.matrix() * polar;
}

} // namespace nfx

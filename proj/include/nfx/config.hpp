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

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nfx {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

/// Propagation speed used throughout (m/s). The rounded value reproduces the
/// customary 10.71 mm wavelength at 28 GHz.
inline constexpr double speed_of_light = 3.0e8;

inline constexpr double pi = std::numbers::pi;

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

} // namespace detail

/// Physical and algorithmic constants shared by every stage of the pipeline.
///
/// The element spacing defaults to half the carrier wavelength when left at
/// zero. The aperture follows the N*d convention rather than (N-1)*d.
struct SystemConfig {
    int antennas = 128;            // N
    int subcarriers = 128;         // M
    int users = 3;                 // U
    double carrier_hz = 28e9;      // f_c
    double bandwidth_hz = 28e6;    // B
    double spacing_m = 0.0;        // d, 0 selects lambda_c / 2
    int compression = 8;           // eta, must divide N
    double noise_power = 1.0;      // sigma^2
    double pilot_power = 1.0;      // p_t

    double wavelength() const { return speed_of_light / carrier_hz; }
    double spacing() const { return spacing_m > 0.0 ? spacing_m : 0.5 * wavelength(); }
    double aperture() const { return antennas * spacing(); }
    double carrier_wavenumber() const { return 2.0 * pi / wavelength(); }
    int selected() const { return antennas / compression; }

    /// 2 D^2 / lambda_c.
    double rayleigh_distance() const {
        const double D = aperture();
        return 2.0 * D * D / wavelength();
    }

    /// Throws std::invalid_argument on the first violated invariant.
    void validate() const {
        detail::require(antennas >= 1, "SystemConfig: antennas must be >= 1");
        detail::require(subcarriers >= 1, "SystemConfig: subcarriers must be >= 1");
        detail::require(users >= 1, "SystemConfig: users must be >= 1");
        detail::require(carrier_hz > 0.0, "SystemConfig: carrier frequency must be positive");
        detail::require(bandwidth_hz >= 0.0 && bandwidth_hz < carrier_hz,
                        "SystemConfig: bandwidth must lie in [0, f_c)");
        detail::require(spacing_m >= 0.0, "SystemConfig: spacing must be non-negative");
        detail::require(compression >= 1 && antennas % compression == 0,
                        "SystemConfig: compression rate must divide the antenna count");
        detail::require(noise_power >= 0.0, "SystemConfig: noise power must be non-negative");
        detail::require(pilot_power > 0.0, "SystemConfig: pilot power must be positive");
    }
};

/// Rayleigh distance 2 D^2 / lambda for an explicit aperture and wavelength.
inline double rayleigh_distance(double aperture_m, double wavelength_m) {
    detail::require(aperture_m > 0.0 && wavelength_m > 0.0,
                    "rayleigh_distance: aperture and wavelength must be positive");
    return 2.0 * aperture_m * aperture_m / wavelength_m;
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

} // namespace nfx

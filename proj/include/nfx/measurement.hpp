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

#include "antenna_selection.hpp"

namespace nfx {

/// Partial observation of a channel through the selected antennas.
struct MeasurementSet {
    CMatrix observed;              // K x M, noisy
    CMatrix clean;                 // K x M, noiseless copy
    SelectionPattern pattern;
    double noise_power;
};

/// Row k of the result is row pattern[k] of H.
inline CMatrix select_rows(const CMatrix& H, const SelectionPattern& pattern) { return restrict_rows(H, pattern); }

/// Explicit K x N binary selection matrix. Only used as a reference; the hot
/// path gathers rows instead.
inline Eigen::MatrixXd measurement_matrix(const SelectionPattern& pattern) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(pattern.size(), pattern.antennas());
    for (int k = 0; k < pattern.size(); ++k) A(k, pattern[k]) = 1.0;
    return A;
}

/// Y = select_rows(H) * pilot + noise, noise i.i.d. CN(0, noise_power). Noise
/// is drawn after the row gather, entry by entry in column-major order.
inline MeasurementSet observe(const CMatrix& H, const SelectionPattern& pattern, double noise_power, Rng& rng,
                              cplx pilot = {1.0, 0.0}) {
    if (noise_power < 0.0) throw std::invalid_argument("observe: noise power must be non-negative");
    CMatrix clean = select_rows(H, pattern) * pilot;
    CMatrix y = clean;
    if (noise_power > 0.0) {
        for (Eigen::Index m = 0; m < y.cols(); ++m)
            for (Eigen::Index k = 0; k < y.rows(); ++k) y(k, m) += complex_normal(rng, noise_power);
    }
    return {std::move(y), std::move(clean), pattern, noise_power};
}

/// Psi = rows of W selected by the pattern.
inline CMatrix sensing_matrix(const PolarDictionary& dict, const SelectionPattern& pattern) {
    return restrict_rows(dict.matrix(), pattern);
}

} // namespace nfx

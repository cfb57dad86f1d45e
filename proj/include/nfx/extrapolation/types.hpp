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

#include "../measurement.hpp"

#include <Eigen/QR>

#include <chrono>
#include <cstdint>

namespace nfx {

/// Operation counters. All *_ops fields count complex multiply-accumulates
/// under a fixed cost model so they are machine independent.
struct OpCounters {
    int iterations = 0;                 // greedy iterations (= detected paths)
    int refine_iterations = 0;
    std::int64_t correlation_ops = 0;   // atoms * K * correlated columns
    std::int64_t ls_solves = 0;
    std::int64_t ls_ops = 0;
    std::int64_t line_search_evals = 0;
    std::int64_t refine_ops = 0;
    int curvature_fallbacks = 0;        // Wolfe searches that ended on an Armijo-only step
    bool rank_deficient = false;
    double wall_ms = 0.0;

    std::int64_t total_ops() const { return correlation_ops + ls_ops + refine_ops; }
};

/// Refined (or on-grid) path parameters. `distances` holds +inf for planar
/// atoms.
struct ParamEstimate {
    std::vector<double> sin_angles;
    std::vector<double> distances;
    CMatrix gains;                      // L x M
};

struct ExtrapolationResult {
    CMatrix reconstruction;             // N x M
    std::vector<int> support;           // dictionary columns in selection order
    std::vector<double> residual_norms; // ||R||_F after each greedy iteration (stopping set)
    ParamEstimate params;
    std::vector<double> objective_trace; // ||Y - Psi G||_F^2 before and after each refinement round
    OpCounters counters;

    int path_count() const { return static_cast<int>(support.size()); }
};

/// eps = sigma * sqrt(rows * cols).
inline double residual_threshold(double sigma, int rows, int cols) {
    detail::require(sigma >= 0.0, "residual_threshold: sigma must be non-negative");
    detail::require(rows > 0 && cols > 0, "residual_threshold: dimensions must be positive");
    return sigma * std::sqrt(static_cast<double>(rows) * cols);
}

/// Training/validation split of the subcarriers, 0-based.
struct CvSplit {
    double ratio;
    int training;              // T = ceil(alpha M)
    int stride;                // Delta = floor(M / T)
    std::vector<int> train;    // 0, Delta, ..., (T-1) Delta
    std::vector<int> validate; // complement, increasing
    int validation() const { return static_cast<int>(validate.size()); }
};

inline CvSplit cv_split(int subcarriers, double ratio) {
    if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("cv_split: ratio must lie in (0, 1)");
    detail::require(subcarriers >= 2, "cv_split: need at least two subcarriers");
    // Guard against ceil() rounding up an exact product like 0.3 * 10.
    const double prod = ratio * subcarriers;
    const double near = std::round(prod);
    const int T = std::abs(prod - near) < 1e-9 * subcarriers ? static_cast<int>(near)
                                                             : static_cast<int>(std::ceil(prod));
    if (T < 1 || subcarriers - T < 1) throw std::invalid_argument("cv_split: degenerate split");
    CvSplit s{ratio, T, subcarriers / T, {}, {}};
    std::vector<char> used(subcarriers, 0);
    for (int t = 0; t < T; ++t) {
        s.train.push_back(t * s.stride);
        used[t * s.stride] = 1;
    }
    for (int m = 0; m < subcarriers; ++m)
        if (!used[m]) s.validate.push_back(m);
    return s;
}

namespace detail {

inline CMatrix gather_columns(const CMatrix& X, const std::vector<int>& cols) {
    CMatrix out(X.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = X.col(cols[j]);
    return out;
}

struct LeastSquares {
    CMatrix coeffs;
    bool rank_deficient;
};

/// Minimum-norm least squares through a complete orthogonal decomposition;
/// pivots below rel_tol * |r_max| are treated as zero.
inline LeastSquares least_squares(const CMatrix& A, const CMatrix& B, double rel_tol = 1e-10) {
    Eigen::CompleteOrthogonalDecomposition<CMatrix> cod;
    cod.setThreshold(rel_tol);
    cod.compute(A);
    return {cod.solve(B), cod.rank() < A.cols()};
}

class Stopwatch {
public:
    Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0_).count();
    }

private:
    std::chrono::steady_clock::time_point t0_;
};

} // namespace detail
} // namespace nfx

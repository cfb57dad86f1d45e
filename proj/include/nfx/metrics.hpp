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

#include "config.hpp"

#include <Eigen/LU>

#include <optional>
#include <vector>

namespace nfx {

/// ||H - H_est||_F^2 / ||H||_F^2.
inline double nmse(const CMatrix& truth, const CMatrix& estimate) {
    if (truth.rows() != estimate.rows() || truth.cols() != estimate.cols())
        throw std::invalid_argument("nmse: dimension mismatch");
    const double ref = truth.squaredNorm();
    if (!(ref > 0.0)) throw std::invalid_argument("nmse: reference channel is zero");
    return (truth - estimate).squaredNorm() / ref;
}

inline double nmse_db(const CMatrix& truth, const CMatrix& estimate) { return linear_to_db(nmse(truth, estimate)); }

/// Zero-forcing combiner H (H^H H)^-1; empty when the Gram matrix is
/// numerically singular.
inline std::optional<CMatrix> zf_combiner(const CMatrix& estimate, double rel_tol = 1e-12) {
    if (estimate.cols() == 0 || estimate.cols() > estimate.rows()) return std::nullopt;
    const CMatrix gram = estimate.adjoint() * estimate;
    Eigen::FullPivLU<CMatrix> lu(gram);
    lu.setThreshold(rel_tol);
    if (!lu.isInvertible()) return std::nullopt;
    return CMatrix(estimate * lu.inverse());
}

/// Per-subcarrier multi-user channels. estimated[m] and actual[m] are N x U.
struct RateContext {
    std::vector<CMatrix> estimated;
    std::vector<CMatrix> actual;
    std::vector<double> powers; // per user; empty means 1 for everyone
    double noise_power = 1.0;

    int users() const { return actual.empty() ? 0 : static_cast<int>(actual.front().cols()); }

    void validate() const {
        detail::require(!actual.empty() && estimated.size() == actual.size(), "RateContext: subcarrier count mismatch");
        for (std::size_t m = 0; m < actual.size(); ++m) {
            detail::require(actual[m].rows() == estimated[m].rows() && actual[m].cols() == estimated[m].cols(),
                            "RateContext: channel shapes differ");
            detail::require(actual[m].cols() <= actual[m].rows(), "RateContext: more users than antennas");
        }
        detail::require(powers.empty() || static_cast<int>(powers.size()) == users(), "RateContext: power count");
        detail::require(noise_power >= 0.0, "RateContext: negative noise power");
    }

    double power(int u) const { return powers.empty() ? 1.0 : powers[static_cast<std::size_t>(u)]; }
};

/// Builds the context from per-user N x M channel matrices.
inline RateContext make_rate_context(const std::vector<CMatrix>& estimated_per_user,
                                     const std::vector<CMatrix>& actual_per_user, double noise_power,
                                     double power = 1.0) {
    detail::require(!actual_per_user.empty() && estimated_per_user.size() == actual_per_user.size(),
                    "make_rate_context: user count mismatch");
    const Eigen::Index N = actual_per_user.front().rows();
    const Eigen::Index M = actual_per_user.front().cols();
    const Eigen::Index U = static_cast<Eigen::Index>(actual_per_user.size());
    RateContext ctx;
    ctx.noise_power = noise_power;
    ctx.powers.assign(static_cast<std::size_t>(U), power);
    for (Eigen::Index m = 0; m < M; ++m) {
        CMatrix est(N, U), act(N, U);
        for (Eigen::Index u = 0; u < U; ++u) {
            est.col(u) = estimated_per_user[static_cast<std::size_t>(u)].col(m);
            act.col(u) = actual_per_user[static_cast<std::size_t>(u)].col(m);
        }
        ctx.estimated.push_back(std::move(est));
        ctx.actual.push_back(std::move(act));
    }
    return ctx;
}

/// Uplink ZF rate of user u averaged over subcarriers (bits/s/Hz) for one
/// channel realization; empty if any subcarrier's combiner is unavailable.
/// Signal p |v^H h_est|^2; interference p |v^H (h - h_est)|^2 plus the other
/// users' p |v^H h_x|^2 plus noise sigma^2 ||v||^2.
inline std::optional<double> achievable_rate(const RateContext& ctx, int u) {
    ctx.validate();
    if (u < 0 || u >= ctx.users()) throw std::out_of_range("achievable_rate: user index");
    double sum = 0.0;
    for (std::size_t m = 0; m < ctx.actual.size(); ++m) {
        const auto V = zf_combiner(ctx.estimated[m]);
        if (!V) return std::nullopt;
        const CVector v = V->col(u);
        const CMatrix& H = ctx.actual[m];
        const CMatrix& Hh = ctx.estimated[m];
        const double signal = ctx.power(u) * std::norm(v.dot(Hh.col(u)));
        double interference = ctx.power(u) * std::norm(v.dot(H.col(u) - Hh.col(u)));
        for (int x = 0; x < ctx.users(); ++x)
            if (x != u) interference += ctx.power(x) * std::norm(v.dot(H.col(x)));
        interference += ctx.noise_power * v.squaredNorm();
        sum += std::log2(1.0 + signal / interference);
    }
    return sum / static_cast<double>(ctx.actual.size());
}

} // namespace nfx

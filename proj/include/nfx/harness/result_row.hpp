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

#include "csv.hpp"


namespace nfx {

/// One CSV line of the Monte-Carlo experiments. Fields that do not apply to a
/// row are left empty rather than zero.
struct ResultRow {
    std::string experiment;
    std::string algorithm;
    std::string pattern_kind;
    std::optional<double> snr_db;
    std::optional<std::int64_t> eta;
    std::optional<double> alpha;
    std::int64_t trial = 0;
    std::optional<double> nmse_db;
    std::optional<double> rate_bps_hz;
    std::optional<std::int64_t> L_hat;
    std::optional<std::int64_t> iterations;
    std::optional<std::int64_t> correlation_ops;
    std::optional<double> wall_ms;
    std::optional<std::int64_t> total_ops;

    static const std::vector<std::string>& header() {
        static const std::vector<std::string> h{"experiment", "algorithm",  "pattern_kind", "snr_db",
                                                "eta",        "alpha",      "trial",        "nmse_db",
                                                "rate_bps_hz", "L_hat",     "iterations",   "correlation_ops",
                                                "wall_ms",    "total_ops"};
        return h;
    }

    std::vector<std::string> fields() const {
        return {experiment,           algorithm,          pattern_kind,        csv::field(snr_db),
                csv::field(eta),      csv::field(alpha),  std::to_string(trial), csv::field(nmse_db),
                csv::field(rate_bps_hz), csv::field(L_hat), csv::field(iterations), csv::field(correlation_ops),
                csv::field(wall_ms),  csv::field(total_ops)};
    }

    static ResultRow parse(std::string_view line) {
        const auto f = csv::split(line);
        if (f.size() != header().size())
            throw std::invalid_argument("ResultRow: expected " + std::to_string(header().size()) + " fields, got " +
                                        std::to_string(f.size()));
        ResultRow r;
        r.experiment = f[0];
        r.algorithm = f[1];
        r.pattern_kind = f[2];
        r.snr_db = csv::optional_double(f[3]);
        r.eta = csv::optional_int(f[4]);
        r.alpha = csv::optional_double(f[5]);
        r.trial = csv::parse_int(f[6]);
        r.nmse_db = csv::optional_double(f[7]);
        r.rate_bps_hz = csv::optional_double(f[8]);
        r.L_hat = csv::optional_int(f[9]);
        r.iterations = csv::optional_int(f[10]);
        r.correlation_ops = csv::optional_int(f[11]);
        r.wall_ms = csv::optional_double(f[12]);
        r.total_ops = csv::optional_int(f[13]);
        return r;
    }

    bool operator==(const ResultRow&) const = default;
};

} // namespace nfx

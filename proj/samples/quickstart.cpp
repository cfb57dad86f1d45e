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

// Extrapolates one random near-field channel from a coherence-minimizing
// antenna subset and prints the NMSE of the on-grid and off-grid estimates.
//
//     quickstart [snr_db] [eta] [seed]

#include <nfx/extrapolation/refine.hpp>
#include <nfx/metrics.hpp>
#include <nfx/random.hpp>

#include <cstdio>
#include <cstdlib>

int main(int argc, char** argv) {
    const double snr_db = argc > 1 ? std::atof(argv[1]) : 10.0;
    nfx::SystemConfig cfg;
    cfg.compression = argc > 2 ? std::atoi(argv[2]) : 4;
    const std::uint64_t seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 7;
    cfg.validate();

    nfx::Rng rng(seed);
    const auto paths = nfx::sample_scenario(rng, 3, cfg);
    nfx::CMatrix H = nfx::generate_channel(paths, cfg).entries;
    H *= std::sqrt(static_cast<double>(H.size())) / H.norm();

    const auto dict = nfx::build_dictionary(cfg);
    const auto search = nfx::coherence_min_random(cfg, dict, 10, rng);
    const double noise = nfx::db_to_linear(-snr_db);
    const auto meas = nfx::observe(H, search.pattern, noise, rng);
    const auto psi = nfx::sensing_matrix(dict, search.pattern);
    const double eps = nfx::residual_threshold(std::sqrt(noise), search.pattern.size(), cfg.subcarriers);

    const auto on_grid = nfx::p_asomp(meas.observed, psi, dict, eps);
    const auto off_grid = nfx::refine(on_grid, meas.observed, search.pattern, dict);

    std::printf("N=%d K=%d M=%d SNR=%.1f dB, pattern coherence %.3f\n", cfg.antennas, cfg.selected(),
                cfg.subcarriers, snr_db, search.coherence);
    for (const auto& p : paths)
        std::printf("  true path %-10s sin=%+.4f r=%.2f m\n", nfx::to_string(p.kind), p.sin_angle(), p.distance);
    for (std::size_t l = 0; l < off_grid.params.sin_angles.size(); ++l)
        std::printf("  estimate %zu       sin=%+.4f r=%.2f m\n", l, off_grid.params.sin_angles[l],
                    off_grid.params.distances[l]);
    std::printf("P-ASOMP  paths=%d NMSE=%.2f dB\n", on_grid.path_count(), nfx::nmse_db(H, on_grid.reconstruction));
    std::printf("P-ASIGW  paths=%d NMSE=%.2f dB\n", off_grid.path_count(), nfx::nmse_db(H, off_grid.reconstruction));
    return 0;
}

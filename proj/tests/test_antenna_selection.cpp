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

#include <catch_amalgamated.hpp>

#include <nfx/antenna_selection.hpp>

#include <numeric>

using Catch::Approx;
using nfx::cplx;

namespace {

nfx::SystemConfig array(int N, int eta) {
    nfx::SystemConfig c;
    c.antennas = N;
    c.subcarriers = 4;
    c.compression = eta;
    return c;
}

nfx::SelectionPattern full(int N) {
    std::vector<int> all(N);
    std::iota(all.begin(), all.end(), 0);
    return nfx::SelectionPattern(all, N);
}

// max_{q<p} |sum_k conj(W(n_k, q)) W(n_k, p)| by plain loops.
double brute_coherence(const nfx::CMatrix& W, const nfx::SelectionPattern& s) {
    double mu = 0.0;
    for (Eigen::Index p = 1; p < W.cols(); ++p)
        for (Eigen::Index q = 0; q < p; ++q) {
            cplx acc = 0.0;
            for (int n : s.indices()) acc += std::conj(W(n, q)) * W(n, p);
            mu = std::max(mu, std::abs(acc));
        }
    return mu;
}

} // namespace

TEST_CASE("Deterministic patterns", "[antenna_selection]") {
    const auto c = array(16, 4);
    CHECK(nfx::dense_uniform(c, 0).indices() == std::vector<int>{0, 1, 2, 3});
    CHECK(nfx::dense_uniform(c, 2).indices() == std::vector<int>{8, 9, 10, 11});
    CHECK(nfx::sparse_comb(c, 0).indices() == std::vector<int>{0, 4, 8, 12});
    CHECK(nfx::sparse_comb(c, 3).indices() == std::vector<int>{3, 7, 11, 15});
    CHECK(nfx::dense_uniform(c, 1).kind() == nfx::PatternKind::DenseUniform);
    CHECK_THROWS_AS(nfx::dense_uniform(c, 4), std::out_of_range);
    CHECK_THROWS_AS(nfx::sparse_comb(c, -1), std::out_of_range);

    const auto one = array(8, 1);
    CHECK(nfx::dense_uniform(one, 0) == full(8));
    CHECK(nfx::sparse_comb(one, 0) == full(8));
}

TEST_CASE("Pattern construction checks", "[antenna_selection]") {
    CHECK_THROWS_AS(nfx::SelectionPattern({}, 4), std::invalid_argument);
    CHECK_THROWS_AS(nfx::SelectionPattern({1, 1}, 4), std::invalid_argument);
    CHECK_THROWS_AS(nfx::SelectionPattern({2, 1}, 4), std::invalid_argument);
    CHECK_THROWS_AS(nfx::SelectionPattern({0, 4}, 4), std::out_of_range);

    const nfx::SelectionPattern p({0, 5, 17}, 32);
    CHECK(nfx::format_pattern(p) == "0,5,17");
    CHECK(nfx::parse_pattern(" 0, 5 ,17\n", 32) == p);
    CHECK_THROWS(nfx::parse_pattern("0,,5", 32));
    CHECK_THROWS(nfx::parse_pattern("0,5x", 32));
    CHECK_THROWS(nfx::parse_pattern("3,1", 32));

    CHECK(nfx::parse_pattern_kind("cmr") == nfx::PatternKind::CoherenceMinRandom);
    CHECK(nfx::parse_pattern_kind("sparse_comb") == nfx::PatternKind::SparseComb);
    CHECK_FALSE(nfx::parse_pattern_kind("bogus").has_value());
}

TEST_CASE("Sparse random patterns", "[antenna_selection]") {
    const auto c = array(16, 4);
    nfx::Rng a(99), b(99);
    const auto pa = nfx::sparse_random(c, a);
    CHECK(pa == nfx::sparse_random(c, b));
    CHECK(pa.size() == 4);
    CHECK(pa.kind() == nfx::PatternKind::SparseRandom);

    nfx::Rng r1(1);
    CHECK(nfx::sparse_random(array(16, 1), r1) == full(16));

    SECTION("each antenna is picked with probability K / N") {
        nfx::Rng rng(2024);
        std::vector<int> hits(16, 0);
        const int draws = 20000;
        for (int t = 0; t < draws; ++t) {
            const auto p = nfx::sparse_random(c, rng);
            for (int n : p.indices()) ++hits[n];
        }
        for (int h : hits) CHECK(static_cast<double>(h) / draws == Approx(0.25).margin(0.02));
    }
}

TEST_CASE("Mutual coherence", "[antenna_selection]") {
    const auto c = array(16, 4);
    const auto dict = nfx::build_dictionary(c, 16, 2);
    nfx::Rng rng(5);
    for (int t = 0; t < 5; ++t) {
        const auto p = nfx::sparse_random(c, rng);
        const double mu = nfx::mutual_coherence(dict, p);
        CHECK(mu == Approx(brute_coherence(dict.matrix(), p)).epsilon(1e-12));
        CHECK(mu == Approx(nfx::mutual_coherence_phase_sum(dict, p)).epsilon(1e-10));
        CHECK(mu == Approx(nfx::mutual_coherence(dict.matrix(), p, 7)).epsilon(1e-12));
        CHECK(mu <= 4.0 + 1e-12);
    }

    const auto p = nfx::sparse_comb(c, 1);
    nfx::CMatrix twins(16, 2);
    twins.col(0) = dict.matrix().col(3);
    twins.col(1) = dict.matrix().col(3);
    CHECK(nfx::mutual_coherence(twins, p) == Approx(4.0).epsilon(1e-12));
    CHECK(nfx::mutual_coherence(nfx::CMatrix(dict.matrix().col(5)), p) == 0.0);

    const nfx::CMatrix rotated = dict.matrix() * std::polar(1.0, 0.77);
    CHECK(nfx::mutual_coherence(rotated, p) == Approx(nfx::mutual_coherence(dict, p)).epsilon(1e-12));
    CHECK_THROWS_AS(nfx::mutual_coherence(dict.matrix(), nfx::SelectionPattern({0}, 8)), std::invalid_argument);
}

TEST_CASE("Coherence-minimizing random selection", "[antenna_selection]") {
    const auto c = array(16, 4);
    const auto dict = nfx::build_dictionary(c, 16, 2);

    SECTION("one candidate reproduces the random draw") {
        nfx::Rng a(31), b(31);
        const auto s = nfx::coherence_min_random(c, dict, 1, a);
        CHECK(s.pattern.indices() == nfx::sparse_random(c, b).indices());
        CHECK(s.pattern.kind() == nfx::PatternKind::CoherenceMinRandom);
        CHECK(s.chosen == 0);
    }
    SECTION("keeps the least coherent candidate") {
        nfx::Rng a(8), b(8);
        const auto s = nfx::coherence_min_random(c, dict, 10, a);
        REQUIRE(s.candidate_coherence.size() == 10);
        for (int r = 0; r < 10; ++r) {
            const auto cand = nfx::sparse_random(c, b);
            const double mu = brute_coherence(dict.matrix(), cand);
            CHECK(s.candidate_coherence[r] == Approx(mu).epsilon(1e-12));
            CHECK(s.coherence <= mu + 1e-12);
            if (r == s.chosen) CHECK(cand.indices() == s.pattern.indices());
        }
        CHECK(s.coherence == Approx(nfx::mutual_coherence(dict, s.pattern)).epsilon(1e-12));
    }
    SECTION("never below the exhaustive minimum") {
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 16; ++i)
            for (int j = i + 1; j < 16; ++j)
                for (int k = j + 1; k < 16; ++k)
                    for (int l = k + 1; l < 16; ++l)
                        best = std::min(best, nfx::mutual_coherence(dict, nfx::SelectionPattern({i, j, k, l}, 16)));
        nfx::Rng rng(77);
        const auto s = nfx::coherence_min_random(c, dict, 50, rng);
        CHECK(s.coherence >= best - 1e-12);
    }
    nfx::Rng rng(0);
    CHECK_THROWS_AS(nfx::coherence_min_random(c, dict, 0, rng), std::invalid_argument);
}

TEST_CASE("Radiation profile", "[antenna_selection]") {
    const auto c = array(128, 8);
    const auto du = nfx::dense_uniform(c, 3);
    const auto sc = nfx::sparse_comb(c, 0);
    CHECK(nfx::radiation_profile(du, 0.0, 10.0, c) == Approx(1.0).epsilon(1e-12));
    CHECK(nfx::radiation_profile(sc, 0.0, 10.0, c, 10.0, false) == Approx(4.0).epsilon(1e-12));
    CHECK(nfx::radiation_profile(sc, 0.3, 7.0, c) <= 1.0 + 1e-12);

    const auto all = full(128);
    for (double s : {0.1, 0.35, 0.8})
        CHECK(nfx::radiation_profile(all, s, 12.0, c) == Approx(nfx::radiation_profile(all, -s, 12.0, c)).margin(1e-12));

    // Half-power width of the main lobe along sin at the reference distance.
    auto width = [&](const nfx::SelectionPattern& p) {
        double s = 0.0;
        while (s < 1.0 && nfx::radiation_profile(p, s, 10.0, c) >= 0.5) s += 1e-4;
        return s;
    };
    CHECK(width(du) > 2.0 * width(sc));

    CHECK_THROWS_AS(nfx::radiation_profile(du, 1.5, 10.0, c), std::invalid_argument);
    CHECK_THROWS_AS(nfx::radiation_profile(du, 0.0, -1.0, c), std::invalid_argument);
}

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

#include <nfx/polar_dictionary.hpp>
#include <nfx/random.hpp>

using Catch::Approx;
using nfx::cplx;

namespace {

nfx::SystemConfig small(int N) {
    nfx::SystemConfig c;
    c.antennas = N;
    c.subcarriers = 4;
    c.compression = 1;
    return c;
}

// Steering vector written out from the second-order distance law.
nfx::CVector oracle_atom(double s, double r, const nfx::SystemConfig& c) {
    const double k = 2.0 * nfx::pi * c.carrier_hz / nfx::speed_of_light;
    const double d = c.spacing();
    nfx::CVector a(c.antennas);
    for (int n = 1; n <= c.antennas; ++n) {
        const double delta = (2.0 * n - c.antennas - 1) / 2.0;
        const double excess = std::isinf(r) ? -delta * d * s : -delta * d * s + delta * delta * d * d * (1 - s * s) / (2 * r);
        a(n - 1) = std::polar(1.0, -k * excess);
    }
    return a;
}

} // namespace

TEST_CASE("Dictionary grid", "[polar_dictionary]") {
    const nfx::SystemConfig c;
    const auto dict = nfx::build_dictionary(c, 128, 4);
    REQUIRE(dict.size() == 128 * 5);
    REQUIRE(dict.matrix().cols() == 640);

    SECTION("angle grid") {
        const auto& g = dict.angle_grid();
        CHECK(g[0] == -1.0);
        CHECK(g[64] == 0.0);
        for (int a = 1; a < 128; ++a) {
            CHECK(g[a] > g[a - 1]);
            CHECK(g[a] == -g[128 - a]);
        }
    }
    SECTION("ring distances") {
        const int broadside1 = dict.column_index(64, 1);
        CHECK(dict.distance(broadside1) == Approx(9.75).epsilon(1e-3));
        for (int a = 1; a < 128; ++a)
            CHECK(dict.distance(dict.column_index(a, 2)) == Approx(dict.distance(dict.column_index(a, 1)) / 2).epsilon(1e-15));
        CHECK(std::isinf(dict.distance(dict.column_index(17, 0))));
        CHECK(dict.distance(dict.column_index(0, 3)) == 0.0);
    }
    SECTION("column index round trip") {
        for (int p = 0; p < dict.size(); ++p) {
            const auto g = dict.grid_point(p);
            CHECK(dict.column_index(g.angle, g.ring) == p);
            CHECK(dict.atom(g.angle, g.ring) == dict.matrix().col(p));
        }
        CHECK_THROWS_AS(dict.column_index(128, 0), std::out_of_range);
        CHECK_THROWS_AS(dict.column_index(0, 5), std::out_of_range);
        CHECK_THROWS_AS(dict.grid_point(640), std::out_of_range);
    }
    SECTION("unit modulus entries") {
        CHECK((dict.matrix().cwiseAbs().array() - 1.0).abs().maxCoeff() <= 1e-12);
    }
    SECTION("far-field broadside atom is all ones") {
        const auto a = dict.atom(64, 0);
        CHECK((a - nfx::CVector::Ones(128)).norm() == 0.0);
    }
}

TEST_CASE("Atoms match the steering-vector oracle", "[polar_dictionary]") {
    const nfx::SystemConfig c;
    const auto dict = nfx::build_dictionary(c, 128, 6);
    nfx::Rng rng(17);
    std::uniform_int_distribution<int> pick_a(1, 127), pick_r(0, 6);
    for (int t = 0; t < 50; ++t) {
        const int a = pick_a(rng), ring = pick_r(rng);
        const int p = dict.column_index(a, ring);
        const auto oracle = oracle_atom(dict.sin_angle(p), dict.distance(p), c);
        CHECK((dict.atom(a, ring) - oracle).cwiseAbs().maxCoeff() <= 1e-9);
    }
    SECTION("and the library steering vector") {
        const int p = dict.column_index(40, 2);
        const auto b = nfx::steering_vector(std::asin(dict.sin_angle(p)), dict.distance(p), c.carrier_hz, c);
        CHECK((dict.matrix().col(p) - b).cwiseAbs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("Literal grid without the far-field ring", "[polar_dictionary]") {
    const auto dict = nfx::build_dictionary(small(16), 16, 3, 1.5, false);
    CHECK(dict.size() == 48);
    CHECK(dict.first_ring() == 1);
    CHECK_THROWS_AS(dict.column_index(0, 0), std::out_of_range);
    CHECK(dict.grid_point(0).ring == 1);
}

TEST_CASE("Default ring count", "[polar_dictionary]") {
    const nfx::SystemConfig c;
    const int nd = nfx::default_ring_count(c, 1.5, 3.0);
    const double D = c.aperture();
    CHECK(D * D / (2 * 2.25 * c.wavelength() * nd) <= 3.0);
    CHECK(D * D / (2 * 2.25 * c.wavelength() * (nd - 1)) > 3.0);
    const auto dict = nfx::build_dictionary(c);
    CHECK(dict.angles() == 128);
    CHECK(dict.rings() == nd);
    CHECK(dict.has_far_field_ring());
}

TEST_CASE("Polar to spatial transform", "[polar_dictionary]") {
    const auto c = small(16);
    const auto dict = nfx::build_dictionary(c, 16, 2);
    const int P = dict.size();

    CHECK(nfx::polar_to_spatial(dict, nfx::CMatrix::Zero(P, 3)).norm() == 0.0);

    nfx::CMatrix one_hot = nfx::CMatrix::Zero(P, 1);
    one_hot(7, 0) = cplx(0.5, -2.0);
    CHECK((nfx::polar_to_spatial(dict, one_hot) - cplx(0.5, -2.0) * dict.matrix().col(7)).norm() <= 1e-14);

    nfx::Rng rng(4);
    nfx::CMatrix Hp(P, 5);
    for (int i = 0; i < P; ++i)
        for (int j = 0; j < 5; ++j) Hp(i, j) = nfx::complex_normal(rng, 1.0);
    const nfx::CMatrix fast = nfx::polar_to_spatial(dict, Hp);
    for (int n = 0; n < 16; ++n)
        for (int m = 0; m < 5; ++m) {
            cplx acc = 0.0;
            for (int p = 0; p < P; ++p) acc += dict.matrix()(n, p) * Hp(p, m);
            CHECK(std::abs(fast(n, m) - acc) <= 1e-10);
        }

    CHECK_THROWS_AS(nfx::polar_to_spatial(dict, nfx::CMatrix::Zero(P + 1, 1)), std::invalid_argument);
}

TEST_CASE("Invalid dictionary grids", "[polar_dictionary]") {
    const auto c = small(8);
    CHECK_THROWS_AS(nfx::build_dictionary(c, 7, 2), std::invalid_argument);
    CHECK_THROWS_AS(nfx::build_dictionary(c, 0, 2), std::invalid_argument);
    CHECK_THROWS_AS(nfx::build_dictionary(c, 8, -1), std::invalid_argument);
    CHECK_THROWS_AS(nfx::build_dictionary(c, 8, 0, 1.5, false), std::invalid_argument);
    CHECK_THROWS_AS(nfx::build_dictionary(c, 8, 2, 0.0), std::invalid_argument);
}

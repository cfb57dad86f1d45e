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

#include <nfx/channel_model.hpp>
#include <nfx/random.hpp>

#include <cmath>

using Catch::Approx;
using nfx::cplx;

namespace {

nfx::SystemConfig config(int N, int M = 1) {
    nfx::SystemConfig c;
    c.antennas = N;
    c.subcarriers = M;
    c.compression = 1;
    return c;
}

// |p_n - source| for antenna n on the x axis and a source at (r sin, r cos).
double exact_distance(double angle, double r, int n, const nfx::SystemConfig& c) {
    const double x = nfx::element_offset(n, c.antennas) * c.spacing();
    return std::sqrt(r * r + x * x - 2.0 * r * x * std::sin(angle));
}

} // namespace

TEST_CASE("Subcarrier frequencies", "[channel_model]") {
    auto c = config(1, 3);
    c.carrier_hz = 100.0;
    c.bandwidth_hz = 3.0;
    CHECK(nfx::subcarrier_frequency(c, 2) == Approx(100.0));

    auto p = config(1, 128);
    CHECK(nfx::subcarrier_frequency(p, 1) == Approx(27.986109375e9).epsilon(1e-14));
    CHECK(nfx::subcarrier_frequency(p, 128) == Approx(28.013890625e9).epsilon(1e-14));
    CHECK_THROWS_AS(nfx::subcarrier_frequency(p, 0), std::out_of_range);
    CHECK_THROWS_AS(nfx::subcarrier_frequency(p, 129), std::out_of_range);
}

TEST_CASE("Second-order antenna distance", "[channel_model]") {
    SECTION("single element sits at the reference point") {
        CHECK(nfx::antenna_distance(0.3, 17.0, 1, config(1)) == 17.0);
    }
    SECTION("odd arrays: the centre element is at distance r") {
        CHECK(nfx::antenna_distance(-0.8, 12.5, 33, config(65)) == Approx(12.5).epsilon(1e-15));
    }
    SECTION("broadside is symmetric about the centre") {
        const auto c = config(16);
        for (int n = 1; n <= 16; ++n) {
            const double delta = nfx::element_offset(n, 16);
            const double expect = 9.0 + delta * delta * c.spacing() * c.spacing() / 18.0;
            CHECK(nfx::antenna_distance(0.0, 9.0, n, c) == Approx(expect).epsilon(1e-15));
            CHECK(nfx::antenna_distance(0.0, 9.0, n, c) == Approx(nfx::antenna_distance(0.0, 9.0, 17 - n, c)));
        }
    }
    SECTION("matches the exact Euclidean distance at 10 m") {
        auto c = config(128);
        c.spacing_m = 5.36e-3;
        for (int n = 1; n <= 128; ++n) {
            const double exact = exact_distance(nfx::pi / 6, 10.0, n, c);
            CHECK(std::abs(nfx::antenna_distance(nfx::pi / 6, 10.0, n, c) - exact) / exact < 1e-3);
        }
    }
    SECTION("approximation error shrinks as the source recedes") {
        const auto c = config(128);
        double prev = std::numeric_limits<double>::infinity();
        for (double r = 2.0; r < 2000.0; r *= 1.6) {
            double worst = 0.0;
            for (int n = 1; n <= 128; ++n)
                worst = std::max(worst, std::abs(nfx::antenna_distance(0.7, r, n, c) - exact_distance(0.7, r, n, c)));
            CHECK(worst < prev);
            prev = worst;
        }
    }
    SECTION("rejects non-positive distances") {
        CHECK_THROWS_AS(nfx::antenna_distance(0.0, 0.0, 1, config(4)), std::invalid_argument);
        CHECK_THROWS_AS(nfx::antenna_distance(0.0, -1.0, 1, config(4)), std::invalid_argument);
    }
}

TEST_CASE("Steering vector", "[channel_model]") {
    const double f = 28e9;
    const double k = 2.0 * nfx::pi * f / nfx::speed_of_light;

    SECTION("single element") {
        const auto b = nfx::steering_vector(0.4, 20.0, f, config(1));
        REQUIRE(b.size() == 1);
        CHECK(std::abs(b(0) - cplx(1.0, 0.0)) < 1e-15);
    }
    SECTION("two elements at broadside") {
        const auto c = config(2);
        const double d = c.spacing();
        const auto b = nfx::steering_vector(0.0, 5.0, f, c);
        const cplx expect = std::polar(1.0, -k * d * d / (8.0 * 5.0));
        CHECK(std::abs(b(0) - expect) < 1e-12);
        CHECK(std::abs(b(1) - expect) < 1e-12);
    }
    SECTION("unit modulus everywhere") {
        const auto c = config(128);
        nfx::Rng rng(3);
        for (int t = 0; t < 20; ++t) {
            const auto b = nfx::steering_vector(nfx::uniform(rng, -1.5, 1.5), nfx::uniform(rng, 1.0, 100.0), f, c);
            CHECK((b.cwiseAbs().array() - 1.0).abs().maxCoeff() <= 1e-12);
        }
    }
    SECTION("converges to planar phases far away") {
        const auto c = config(128);
        const double D = c.aperture();
        const double r = 1e6 * D * D / c.wavelength();
        const double angle = 0.35;
        const auto b = nfx::steering_vector(angle, r, f, c);
        for (int n = 1; n <= 128; ++n) {
            const double planar = k * nfx::element_offset(n, 128) * c.spacing() * std::sin(angle);
            CHECK(std::abs(std::arg(b(n - 1) * std::polar(1.0, -planar))) <= 1e-6);
        }
    }
    SECTION("rejects bad inputs") {
        CHECK_THROWS_AS(nfx::steering_vector(0.0, 0.0, f, config(4)), std::invalid_argument);
        CHECK_THROWS_AS(nfx::steering_vector(0.0, 1.0, 0.0, config(4)), std::invalid_argument);
    }
}

TEST_CASE("Gain correction", "[channel_model]") {
    CHECK(nfx::gain_correction(0.2, 3.0, config(1))(0) == 1.0);

    const auto c = config(128);
    const auto far = nfx::gain_correction(0.5, 1e6, c);
    CHECK((far.array() - 1.0).abs().maxCoeff() <= 1e-6);

    const auto near = nfx::gain_correction(0.0, 10.0, c);
    for (int n = 1; n <= 128; ++n) {
        const double x = nfx::element_offset(n, 128) * c.spacing();
        CHECK(near(n - 1) == Approx(10.0 / std::sqrt(100.0 + x * x)).epsilon(1e-6));
        CHECK(near(n - 1) > 0.0);
    }
    CHECK_THROWS_AS(nfx::gain_correction(0.0, -2.0, c), std::invalid_argument);
}

TEST_CASE("Path gains", "[channel_model]") {
    const double f = 28e9;
    const double lambda = nfx::speed_of_light / f;

    nfx::PathComponent los;
    los.distance = lambda / (4.0 * nfx::pi);
    CHECK(std::abs(nfx::path_gain(los, f)) == Approx(1.0).epsilon(1e-12));

    los.distance = 10.0;
    CHECK(std::abs(nfx::path_gain(los, f)) == Approx(8.525e-5).epsilon(1e-3));

    nfx::PathComponent refl;
    refl.kind = nfx::PathKind::Reflected;
    refl.pre_distance = 4.0;
    refl.distance = 10.0;
    refl.reflectivity = 0.999;
    CHECK(std::abs(nfx::path_gain(refl, f)) < std::abs(nfx::path_gain(los, f)));

    nfx::PathComponent scat;
    scat.kind = nfx::PathKind::Scattering;
    scat.pre_distance = 4.0;
    scat.distance = 6.0;
    scat.reflectivity = cplx(0.0, 0.3);
    const cplx expect = cplx(0.0, 0.3) * lambda * lambda * std::polar(1.0, -2.0 * nfx::pi / lambda * 10.0) /
                        (16.0 * nfx::pi * nfx::pi * 24.0);
    CHECK(std::abs(nfx::path_gain(scat, f) - expect) <= 1e-12 * std::abs(expect));

    SECTION("invalid paths") {
        auto bad = refl;
        bad.reflectivity = 1.0;
        CHECK_THROWS_AS(nfx::path_gain(bad, f), std::invalid_argument);
        bad.reflectivity = 0.0;
        CHECK_THROWS_AS(nfx::path_gain(bad, f), std::invalid_argument);
        bad = los;
        bad.distance = 0.0;
        CHECK_THROWS_AS(nfx::path_gain(bad, f), std::invalid_argument);
    }
}

TEST_CASE("Channel synthesis", "[channel_model]") {
    SECTION("single LoS path, single antenna and subcarrier") {
        const auto c = config(1, 1);
        nfx::PathComponent los;
        los.distance = 15.0;
        const std::vector<nfx::PathComponent> paths{los};
        const auto H = nfx::generate_channel(paths, c);
        CHECK(std::abs(H.entries(0, 0) - nfx::path_gain(los, c.carrier_hz)) < 1e-18);
        CHECK(H.paths.size() == 1);
    }
    SECTION("opposite gains cancel") {
        nfx::PathComponent a;
        a.kind = nfx::PathKind::Reflected;
        a.angle_rad = 0.2;
        a.pre_distance = 12.0;
        a.distance = 30.0;
        a.reflectivity = cplx(0.3, 0.4);
        auto b = a;
        b.reflectivity = -a.reflectivity;
        const std::vector<nfx::PathComponent> paths{a, b};
        CHECK(nfx::generate_channel(paths, config(8, 4)).entries.norm() < 1e-20);
    }
    SECTION("superposition of three mixed paths") {
        const auto c = config(16, 4);
        nfx::Rng rng(11);
        const auto paths = nfx::sample_scenario(rng, 3, c);
        const auto H = nfx::generate_channel(paths, c).entries;
        nfx::CMatrix sum = nfx::CMatrix::Zero(16, 4);
        for (const auto& p : paths) {
            const std::vector<nfx::PathComponent> one{p};
            sum += nfx::generate_channel(one, c).entries;
        }
        CHECK((H - sum).norm() <= 1e-12 * H.norm());
    }
    SECTION("linear in the reflectivities") {
        const auto c = config(16, 4);
        nfx::Rng rng(5);
        auto paths = nfx::sample_scenario(rng, 3, c);
        paths.erase(paths.begin());
        const auto H = nfx::generate_channel(paths, c).entries;
        for (auto& p : paths) p.reflectivity *= 0.5;
        CHECK((nfx::generate_channel(paths, c).entries - 0.5 * H).norm() <= 1e-12 * H.norm());
    }
    SECTION("regeneration is bit-identical") {
        const auto c = config(32, 8);
        nfx::Rng rng(9);
        const auto paths = nfx::sample_scenario(rng, 3, c);
        CHECK(nfx::generate_channel(paths, c).entries == nfx::generate_channel(paths, c).entries);
    }
    SECTION("empty path list") {
        CHECK_THROWS_AS(nfx::generate_channel(std::span<const nfx::PathComponent>{}, config(4)),
                        std::invalid_argument);
    }
}

TEST_CASE("Scenario sampling", "[channel_model]") {
    const auto c = config(128, 128);
    SECTION("deterministic for a fixed seed") {
        nfx::Rng a(42), b(42);
        const auto pa = nfx::sample_scenario(a, 4, c);
        const auto pb = nfx::sample_scenario(b, 4, c);
        REQUIRE(pa.size() == pb.size());
        for (std::size_t i = 0; i < pa.size(); ++i) {
            CHECK(pa[i].angle_rad == pb[i].angle_rad);
            CHECK(pa[i].distance == pb[i].distance);
            CHECK(pa[i].reflectivity == pb[i].reflectivity);
        }
    }
    SECTION("a single path is the LoS path") {
        nfx::Rng rng(1);
        const auto p = nfx::sample_scenario(rng, 1, c);
        REQUIRE(p.size() == 1);
        CHECK(p[0].kind == nfx::PathKind::LineOfSight);
        CHECK(p[0].reflectivity == cplx(0.0, 0.0));
    }
    SECTION("path kinds and priors") {
        nfx::Rng rng(2);
        double sum = 0.0, sin_sum = 0.0;
        int count = 0;
        for (int t = 0; t < 10000; ++t) {
            const auto p = nfx::sample_scenario(rng, 3, c);
            REQUIRE(p.size() == 3);
            CHECK(p[0].kind == nfx::PathKind::LineOfSight);
            CHECK(p[1].kind == nfx::PathKind::Reflected);
            CHECK(p[2].kind == nfx::PathKind::Scattering);
            const double gf = std::abs(p[1].reflectivity), gs = std::abs(p[2].reflectivity);
            CHECK((gf >= 0.5 && gf < 1.0));
            CHECK((gs >= 0.1 && gs < 0.5));
            // LoS range, reflection segments and both scattering segments are U(10, 80).
            for (double r : {p[0].distance, p[1].pre_distance, p[1].distance - p[1].pre_distance, p[2].pre_distance,
                             p[2].distance}) {
                CHECK((r >= 10.0 && r <= 80.0));
                sum += r;
                ++count;
            }
            sin_sum += p[0].sin_angle();
        }
        CHECK(sum / count == Approx(45.0).epsilon(0.02));
        CHECK(std::abs(sin_sum / 10000) < 0.03);
    }
    SECTION("needs at least one path") {
        nfx::Rng rng(1);
        CHECK_THROWS_AS(nfx::sample_scenario(rng, 0, c), std::invalid_argument);
    }
}

TEST_CASE("Rayleigh distance", "[channel_model]") {
    CHECK(nfx::rayleigh_distance(0.69, 10.71e-3) == Approx(88.91).epsilon(0.005));
    const nfx::SystemConfig c;
    CHECK(c.wavelength() == Approx(10.71e-3).epsilon(1e-3));
    CHECK(c.spacing() == Approx(5.36e-3).epsilon(1e-3));
    CHECK(c.rayleigh_distance() == Approx(87.77).epsilon(1e-3));
    CHECK(c.selected() == 16);
}

TEST_CASE("System configuration checks", "[channel_model]") {
    nfx::SystemConfig c;
    CHECK_NOTHROW(c.validate());
    c.compression = 3;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.bandwidth_hz = c.carrier_hz;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.antennas = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

// SPDX-License-Identifier: Apache-2.0
//
// irsap - codebook design and evaluation for IRS-integrated access points
// Copyright (C) 2026 The irsap authors
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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "irsap/geometry.hpp"

#include <algorithm>

using namespace irsap;

namespace
{
    const double lambda = 0.05;
}

TEST_CASE("deployment limits at the reference deployment")
{
    const auto lim = max_deployable_elements(RadomeConfig{});
    for (const auto &l : lim)
    {
        CHECK(l.horizontal == 10);
        CHECK(l.vertical == 1);
    }
}

TEST_CASE("cubic radome with one cell per face")
{
    RadomeConfig cfg;
    cfg.length = cfg.width = cfg.thickness = cfg.element_spacing = 0.02;
    cfg.antenna_spacing = 0.005;
    cfg.max_elevation = pi / 5.0; // tan < 1
    for (const auto &l : max_deployable_elements(cfg))
    {
        CHECK(l.horizontal == 1);
        CHECK(l.vertical == 1);
    }
}

TEST_CASE("rectangular radome at 45 degrees")
{
    RadomeConfig cfg;
    cfg.length = 10 * lambda;
    cfg.width = 5 * lambda;
    cfg.thickness = lambda;
    cfg.element_spacing = lambda / 2;
    cfg.max_elevation = pi / 4;
    const auto lim = max_deployable_elements(cfg);
    // faces at x = +-d_l/2 run along y, so they hold d_w / d_I elements
    CHECK(lim[0].horizontal == 10);
    CHECK(lim[1].horizontal == 10);
    CHECK(lim[2].horizontal == 20);
    CHECK(lim[3].horizontal == 20);
    for (const auto &l : lim)
        CHECK(l.vertical == 2);
}

TEST_CASE("zero elevation leaves only the thickness bound")
{
    RadomeConfig cfg;
    cfg.thickness = 3 * lambda;
    cfg.max_elevation = 0.0;
    CHECK(max_deployable_elements(cfg)[0].vertical == 6);
}

TEST_CASE("reference geometry: four rows of ten elements just below the antenna plane")
{
    const RadomeGeometry g = build_full_geometry(RadomeConfig{});
    REQUIRE(g.element_count() == 40);
    CHECK(g.element_counts() == std::array<int, 4>{10, 10, 10, 10});
    for (const auto &p : g.element_positions())
        CHECK(p.z() == doctest::Approx(-lambda / 4));

    for (int a = 0; a < 10; ++a)
    {
        CHECK(g.element_positions()[a].x() == doctest::Approx(-0.125));
        CHECK(g.element_positions()[10 + a].x() == doctest::Approx(0.125));
        CHECK(g.element_positions()[20 + a].y() == doctest::Approx(-0.125));
        CHECK(g.element_positions()[30 + a].y() == doctest::Approx(0.125));
        // centered along the face
        CHECK(g.element_positions()[a].y() == doctest::Approx((a - 4.5) * 0.025));
    }
    CHECK(g.irs(0).normal == Vec3(1, 0, 0));
    CHECK(g.irs(1).normal == Vec3(-1, 0, 0));
    CHECK(g.irs(2).normal == Vec3(0, 1, 0));
    CHECK(g.irs(3).normal == Vec3(0, -1, 0));
}

TEST_CASE("antenna placement")
{
    RadomeConfig cfg;
    cfg.antennas_x = cfg.antennas_y = 1;
    const RadomeGeometry one = build_full_geometry(cfg);
    REQUIRE(one.antenna_count() == 1);
    CHECK(one.antenna_positions()[0].norm() == 0.0);

    const RadomeGeometry four = build_full_geometry(RadomeConfig{});
    REQUIRE(four.antenna_count() == 4);
    // index m = m_x M_y + m_y
    const std::array<Vec3, 4> expect = {Vec3(-lambda / 4, -lambda / 4, 0), Vec3(-lambda / 4, lambda / 4, 0),
                                        Vec3(lambda / 4, -lambda / 4, 0), Vec3(lambda / 4, lambda / 4, 0)};
    for (int m = 0; m < 4; ++m)
        CHECK((four.antenna_positions()[m] - expect[m]).norm() < 1e-15);
}

TEST_CASE("elements stack downward along z when the face allows two rows")
{
    RadomeConfig cfg;
    cfg.length = 10 * lambda;
    cfg.width = 5 * lambda;
    cfg.thickness = lambda;
    cfg.max_elevation = pi / 4;
    const RadomeGeometry g = build_geometry(cfg, {4, 4, 6, 0});
    CHECK(g.irs(0).horizontal == 2);
    CHECK(g.irs(0).vertical == 2);
    CHECK(g.irs(3).count() == 0);
    CHECK(g.element_positions()[0].z() == doctest::Approx(-lambda / 4));
    CHECK(g.element_positions()[1].z() == doctest::Approx(-3 * lambda / 4));
    for (const auto &p : g.element_positions())
    {
        CHECK(p.z() < 0.0);
        CHECK(p.z() >= -cfg.thickness);
    }
}

TEST_CASE("element counts beyond the deployment limits are rejected")
{
    RadomeConfig cfg;
    CHECK_THROWS_AS(build_geometry(cfg, {11, 10, 10, 10}), ConfigError);
    CHECK_THROWS_AS(build_geometry(cfg, {-1, 10, 10, 10}), ConfigError);

    cfg.length = 10 * lambda;
    cfg.width = 5 * lambda;
    cfg.thickness = lambda;
    cfg.max_elevation = pi / 4;
    CHECK_THROWS_AS(build_geometry(cfg, {3, 4, 4, 4}), ConfigError); // not a multiple of N_{j,2}
}

TEST_CASE("invalid radome parameters name the field")
{
    RadomeConfig cfg;
    cfg.length = 0.0;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("d_l"), ConfigError);
    cfg = RadomeConfig{};
    cfg.max_elevation = 2.0;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("theta_max"), ConfigError);
}

TEST_CASE("mirror through x = 0 swaps IRS 1 and IRS 2 and fixes the antennas")
{
    const RadomeGeometry g = build_full_geometry(RadomeConfig{});
    auto mirror = [](Vec3 p) { return Vec3(-p.x(), p.y(), p.z()); };
    for (int a = 0; a < 10; ++a)
        CHECK((mirror(g.element_positions()[a]) - g.element_positions()[10 + a]).norm() < 1e-15);
    for (const auto &q : g.antenna_positions())
    {
        const Vec3 m = mirror(q);
        CHECK(std::any_of(g.antenna_positions().begin(), g.antenna_positions().end(),
                          [&](const Vec3 &o) { return (o - m).norm() < 1e-15; }));
    }
}

TEST_CASE("element to antenna distances respect the half-diagonal bound")
{
    const RadomeConfig cfg;
    const RadomeGeometry g = build_full_geometry(cfg);
    const double array_half = 0.5 * std::hypot((cfg.antennas_x - 1) * cfg.antenna_spacing, (cfg.antennas_y - 1) * cfg.antenna_spacing);
    const double face_half = 0.5 * std::hypot(std::max(cfg.length, cfg.width), cfg.thickness);
    const double reach = 0.5 * std::max(cfg.length, cfg.width);
    for (const auto &p : g.element_positions())
    {
        double nearest = 1e9;
        for (const auto &q : g.antenna_positions())
            nearest = std::min(nearest, (p - q).norm());
        CHECK(nearest <= reach + face_half + array_half);
    }
}

TEST_CASE("geometry is a pure function of its configuration")
{
    const RadomeGeometry a = build_full_geometry(RadomeConfig{});
    const RadomeGeometry b = build_full_geometry(RadomeConfig{});
    CHECK(a.hash() == b.hash());
    CHECK(a.element_positions() == b.element_positions());

    RadomeConfig other;
    other.reflect_gain = 1.0;
    CHECK(build_full_geometry(other).hash() != a.hash());
}

TEST_CASE("default element gain is the aperture gain 4 pi A / lambda^2")
{
    RadomeConfig cfg;
    CHECK(cfg.element_gain() == doctest::Approx(pi));
    cfg.reflect_gain = 1.0;
    CHECK(cfg.element_gain() == 1.0);
}

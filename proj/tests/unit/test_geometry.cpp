// SPDX-License-Identifier: Apache-2.0
//
// fr3sim - geometry-based stochastic channel simulator for 7-24 GHz
// Copyright (C) 2026 The fr3sim authors
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

#include "common.hpp"

#include "fr3/geometry.hpp"
#include "fr3/rng.hpp"

#include <doctest.h>

using namespace fr3;

TEST_CASE("angle wrapping")
{
    CHECK(wrap_azimuth(190.0) == doctest::Approx(-170.0));
    CHECK(wrap_azimuth(-190.0) == doctest::Approx(170.0));
    CHECK(wrap_azimuth(180.0) == 180.0);
    CHECK(wrap_azimuth(720.0) == doctest::Approx(0.0));
    CHECK(wrap_zenith(-10.0) == doctest::Approx(10.0));
    CHECK(wrap_zenith(190.0) == doctest::Approx(170.0));

    Rng r(3, 0, 0, Step::Test);
    for (int i = 0; i < 1000; ++i)
    {
        double a = wrap_azimuth(r.uniform(-2000.0, 2000.0)), z = wrap_zenith(r.uniform(-2000.0, 2000.0));
        CHECK(a >= -180.0);
        CHECK(a <= 180.0);
        CHECK(z >= 0.0);
        CHECK(z <= 180.0);
    }
}

TEST_CASE("link geometry of a 100 m link")
{
    // d3D and ZOD from the scripted oracle
    LinkGeometry g = link_geometry(Vec3(0, 0, 35), {}, Vec3(100, 0, 1.5));
    CHECK(g.d2D == doctest::Approx(100.0));
    CHECK(g.d3D == doctest::Approx(105.46207849269803).epsilon(1e-12));
    CHECK(g.los_zod == doctest::Approx(108.5208494774711).epsilon(1e-12));
    CHECK(g.los_aod == doctest::Approx(0.0));
    CHECK(g.los_aoa == doctest::Approx(180.0));
    CHECK(g.los_zoa == doctest::Approx(180.0 - 108.5208494774711));
    CHECK_THROWS_AS(link_geometry(Vec3(1, 2, 3), {}, Vec3(1, 2, 3)), std::invalid_argument);
}

TEST_CASE("rotations are proper and LCS conversion inverts")
{
    Rng r(5, 0, 0, Step::Test);
    for (int i = 0; i < 200; ++i)
    {
        Orientation o{r.uniform(-180, 180), r.uniform(-90, 90), r.uniform(-180, 180)};
        Mat3 R = rotation(o);
        CHECK((R * R.transpose() - Mat3::Identity()).norm() < 1e-12);
        CHECK(R.determinant() == doctest::Approx(1.0));

        double z = r.uniform(5, 175), a = r.uniform(-175, 175);
        LcsAngles l = gcs_to_lcs(o, z, a);
        LcsAngles back = lcs_to_gcs(o, l.zenith, l.azimuth);
        CHECK(back.zenith == doctest::Approx(z).epsilon(1e-9));
        CHECK(wrap_azimuth(back.azimuth - a) == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(back.psi == doctest::Approx(-l.psi).epsilon(1e-9));
    }
    LcsAngles id = gcs_to_lcs({}, 60.0, 30.0);
    CHECK(id.zenith == doctest::Approx(60.0));
    CHECK(id.azimuth == doctest::Approx(30.0));
    CHECK(id.psi == doctest::Approx(0.0));
}

TEST_CASE("hexagonal layout with wrap-around")
{
    SiteLayout L = build_hex_layout(500.0, 2, 25.0);
    REQUIRE(L.sites.size() == 19);
    CHECK(L.wrap_vectors.size() == 6);
    for (const auto &s : L.sites)
        CHECK(s.sectors.size() == 3);
    CHECK(L.sites[0].position.head<2>().norm() == doctest::Approx(0.0));

    // nearest neighbour spacing is the ISD
    for (std::size_t i = 1; i < L.sites.size(); ++i)
        CHECK((L.sites[i].position - L.sites[0].position).head<2>().norm() >= 500.0 - 1e-9);

    // every site sees any point within the radius of the wrapped cluster
    Rng r(9, 0, 0, Step::Test);
    for (int i = 0; i < 500; ++i)
    {
        Vec3 p(r.uniform(-1200, 1200), r.uniform(-1200, 1200), 1.5);
        for (std::size_t s = 0; s < L.sites.size(); ++s)
        {
            double d = wrapped_distance_2d(L, p, s);
            CHECK(d <= (p - L.sites[s].position).head<2>().norm() + 1e-9);
            CHECK(d <= std::sqrt(19.0 / 3.0) * 500.0 + 1e-6);
        }
    }
    CHECK_THROWS_AS(build_hex_layout(0.0), std::invalid_argument);
    CHECK_THROWS_AS(wrapped_distance_2d(L, Vec3::Zero(), 19), std::invalid_argument);
}

TEST_CASE("indoor layout")
{
    SiteLayout L = build_indoor_layout(120.0, 50.0, 12, 3.0);
    REQUIRE(L.sites.size() == 12);
    for (const auto &s : L.sites)
    {
        CHECK(s.position.x() > 0.0);
        CHECK(s.position.x() < 120.0);
        CHECK(s.position.y() > 0.0);
        CHECK(s.position.y() < 50.0);
        CHECK(s.position.z() == 3.0);
    }
    // 6 x 2 grid, 20 m column spacing
    CHECK(L.sites[1].position.x() - L.sites[0].position.x() == doctest::Approx(20.0));
    CHECK(build_indoor_layout(100.0, 50.0, 7, 3.0).sites.size() == 7);
    CHECK_THROWS_AS(build_indoor_layout(100.0, 50.0, 0, 3.0), std::invalid_argument);
}

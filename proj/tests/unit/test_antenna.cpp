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

#include "fr3/antenna.hpp"
#include "fr3/rng.hpp"

#include <doctest.h>

using namespace fr3;

TEST_CASE("directional element pattern")
{
    ElementPattern p;
    CHECK(element_power_pattern(p, 90.0, 0.0) == 0.0);
    CHECK(element_power_pattern(p, 90.0, 180.0) == -30.0);
    CHECK(element_power_pattern(p, 90.0, 65.0 / 2.0) == doctest::Approx(-3.0));
    CHECK(element_power_pattern(p, 90.0 + 65.0 / 2.0, 0.0) == doctest::Approx(-3.0));
    // combined attenuation is capped at A_max
    CHECK(element_power_pattern(p, 170.0, 120.0) == -30.0);

    Rng r(2, 0, 0, Step::Test);
    for (int i = 0; i < 1000; ++i)
    {
        double z = r.uniform(0, 180), a = r.uniform(-180, 180);
        double g = element_power_pattern(p, z, a);
        CHECK(g <= 0.0);
        CHECK(g >= -30.0);
        // power identity of the field split, for any slant
        p.slant = r.uniform(-90, 90);
        FieldPair f = field_pattern_lcs(p, z, a);
        CHECK(10.0 * std::log10(f.theta * f.theta + f.phi * f.phi) == doctest::Approx(g + p.max_gain).epsilon(1e-9));
    }
}

TEST_CASE("field pattern power is invariant under mounting rotation")
{
    ElementPattern p = ElementPattern::isotropic(45.0);
    Rng r(4, 0, 0, Step::Test);
    for (int i = 0; i < 200; ++i)
    {
        Orientation o{r.uniform(-180, 180), r.uniform(-90, 90), r.uniform(-180, 180)};
        FieldPair f = field_pattern(p, o, r.uniform(1, 179), r.uniform(-180, 180));
        CHECK(f.theta * f.theta + f.phi * f.phi == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("panel array positions and extent")
{
    PanelArray a;
    a.M = 16;
    a.N = 64;
    a.P = 2;
    const double lambda = 3e8 / 7e9;
    auto pos = element_positions(a, lambda);
    REQUIRE(pos.size() == a.size());
    CHECK(a.size() == 2048);
    // element span 63 and 15 half-wavelengths (scripted oracle: 1.35 m x 0.3214 m) plus one spacing
    auto [w, h] = array_extent(a, lambda);
    CHECK(w == doctest::Approx(1.35 + lambda / 2).epsilon(1e-12));
    CHECK(h == doctest::Approx(0.32142857142857145 + lambda / 2).epsilon(1e-12));
    for (const auto &p : pos)
        CHECK(p.x() == 0.0);

    auto sl = element_slants(a);
    REQUIRE(sl.size() == pos.size());
    CHECK(sl[0] != sl[1]);

    PanelArray bad;
    bad.P = 3;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("UE candidate locations")
{
    auto hh = ue_candidate_locations(UEDevice::handheld());
    REQUIRE(hh.size() == 8);
    for (const auto &c : hh)
    {
        CHECK(std::abs(c.offset.x()) <= 0.075 + 1e-12);
        CHECK(std::abs(c.offset.y()) <= 0.035 + 1e-12);
        // outward radial orientation
        double az = std::atan2(c.offset.y(), c.offset.x()) * rad2deg;
        CHECK(c.orientation.alpha == doctest::Approx(az));
    }
    auto cpe = ue_candidate_locations(UEDevice::cpe());
    CHECK(cpe.size() == 9);

    UEDevice sel = UEDevice::handheld();
    sel.selected = {0, 4};
    CHECK(ue_candidate_locations(sel).size() == 2);
    sel.selected = {8};
    CHECK_THROWS_AS(ue_candidate_locations(sel), std::invalid_argument);
}

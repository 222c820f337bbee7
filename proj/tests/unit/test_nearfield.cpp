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

#include "fr3/coefficients.hpp"
#include "fr3/nearfield.hpp"
#include "fr3/smallscale.hpp"

#include <doctest.h>

using namespace fr3;

namespace
{
    ClusterSet clusters(std::uint64_t link, int M)
    {
        SmallScaleInputs in;
        in.N = 10;
        in.M = M;
        in.lsp.DS = 40e-9;
        in.spreads = {30.0, 10.0, 8.0, 4.0, 11.0, 5.0, 7.0, 2.0};
        in.r_tau = 3.0;
        return generate_cluster_set(in, test::registry().scaling, 21, 0, link);
    }

    ArrayEndpoint line(int n, double lambda, const Vec3 &ref, double bearing)
    {
        PanelArray a;
        a.N = n;
        a.M = 2;
        a.pattern = ElementPattern::isotropic();
        return make_panel_endpoint(a, ref, Orientation{bearing, 0.0, 0.0}, lambda);
    }
}

TEST_CASE("source distances split the path length")
{
    for (std::uint64_t link = 0; link < 30; ++link)
    {
        ClusterSet cs = clusters(link, 20);
        RayGrid rd = ray_delays(cs, 3.91e-9, true);
        Rng r(21, 0, link, Step::NearField);
        const double d3D = 40.0, dtau = 5e-9;
        const int N_spec = 2;
        NearFieldGeometry g = source_distances(cs, rd, d3D, dtau, N_spec, 2.0, 3.0, r, Vec3(0, 0, 10), Vec3(40, 0, 1.5));
        for (int n = 0; n < cs.N; ++n)
        {
            CHECK(g.s_bs[n] > 0.0);
            CHECK(g.s_bs[n] <= 1.0);
            for (int m = 0; m < cs.M; ++m)
            {
                double total = d3D + (rd[n][m] + dtau) * 3e8;
                CHECK(total >= d3D);
                if (n < N_spec)
                {
                    CHECK(g.d1[n][m] == doctest::Approx(total));
                    CHECK(g.d2[n][m] == doctest::Approx(total));
                }
                else
                    CHECK(g.d1[n][m] + g.d2[n][m] == doctest::Approx(total).epsilon(1e-12));
                CHECK((g.p_tx[n][m] - Vec3(0, 0, 10)).norm() == doctest::Approx(g.d1[n][m]));
            }
        }
    }
    ClusterSet cs = clusters(0, 20);
    Rng r(1);
    CHECK_THROWS_AS(source_distances(cs, {}, 10, 0, 0, 2, 2, r, Vec3::Zero(), Vec3::Zero()), std::invalid_argument);
    CHECK_THROWS_AS(source_distances(cs, ray_delays(cs, 0, false), 10, 0, 0, 0, 2, r, Vec3::Zero(), Vec3::Zero()),
                    std::invalid_argument);
}

TEST_CASE("spherical phases tend to plane waves")
{
    const double lambda = 3e8 / 15e9;
    const Vec3 o(0.0, 0.3, -0.1), r = direction(70.0, 25.0);
    const std::complex<double> plane = std::polar(1.0, 2.0 * std::numbers::pi * r.dot(o) / lambda);
    double last = 1e9;
    for (double d : {1.0, 10.0, 100.0, 1e3, 1e4, 1e5})
    {
        double err = std::abs(nlos_element_phase(o, d, r, lambda) - plane);
        CHECK(err < last);
        last = err;
    }
    const double aperture = o.norm();
    CHECK(std::abs(std::arg(nlos_element_phase(o, 1e6 * aperture, r, lambda) / plane)) < 1e-3);
    CHECK(nlos_element_phase(Vec3::Zero(), 3.0, r, lambda) == std::complex<double>(1.0, 0.0));
    CHECK_THROWS_AS(nlos_element_phase(o, 0.0, r, lambda), std::invalid_argument);

    // exact element distance
    Vec3 a(0, 0, 10), b(30, 40, 10);
    CHECK(std::arg(los_element_phase(a, b, 0.3) * std::polar(1.0, 2.0 * std::numbers::pi * 50.0 / 0.3)) ==
          doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("element-wise angles")
{
    ElementAngles e = element_wise_angles(Vec3(10, 10, 0), Vec3(0, 0, 0));
    CHECK(e.azimuth == doctest::Approx(45.0));
    CHECK(e.zenith == doctest::Approx(90.0));
    e = element_wise_angles(Vec3(0, 0, 5), Vec3(0, 0, 0));
    CHECK(e.zenith == doctest::Approx(0.0));
    CHECK_THROWS_AS(element_wise_angles(Vec3(1, 2, 3), Vec3(1, 2, 3)), std::invalid_argument);
}

TEST_CASE("near-field synthesis keeps delays and single-ray amplitudes")
{
    const double lambda = 3e8 / 10e9;
    const Vec3 bs(0, 0, 10), ue(20, 0, 1.5);
    ArrayEndpoint tx = line(16, lambda, bs, 0.0), rx = line(2, lambda, ue, 180.0);
    for (std::uint64_t link = 0; link < 10; ++link)
    {
        ClusterSet cs = clusters(link, 1);
        Rng rp(21, 0, link, Step::Phase), rn(21, 0, link, Step::NearField);
        PhaseGrid ph = draw_phases(cs.N, cs.M, rp);
        SynthesisOptions ff;
        ff.fc = 10.0;
        ff.d3D = (ue - bs).norm();
        NearFieldGeometry g = source_distances(cs, ray_delays(cs, 0.0, true), ff.d3D, 0.0, 1, 2.0, 2.0, rn, bs, ue);
        SynthesisOptions nf = ff;
        nf.near_field = &g;
        ChannelRealization A = synthesize(cs, tx, rx, ph, ff), B = synthesize(cs, tx, rx, ph, nf);
        REQUIRE(A.n_taps() == B.n_taps());
        CHECK(A.delays == B.delays);
        double diff = 0.0;
        for (std::size_t k = 0; k < A.n_taps(); ++k)
            for (std::size_t i = 0; i < A.taps[k].size(); ++i)
            {
                CHECK(std::abs(B.taps[k][i]) == doctest::Approx(std::abs(A.taps[k][i])).epsilon(1e-9));
                diff += std::abs(B.taps[k][i] - A.taps[k][i]);
            }
        CHECK(diff > 0.0); // phases do change
    }
}

TEST_CASE("near-field synthesis converges to far field at large range")
{
    const double lambda = 3e8 / 10e9;
    const Vec3 bs(0, 0, 10);
    for (double range : {50.0, 5e3, 5e5})
    {
        const Vec3 ue(range, 0, 1.5);
        ArrayEndpoint tx = line(16, lambda, bs, 0.0), rx = line(2, lambda, ue, 180.0);
        ClusterSet cs = clusters(3, 20);
        Rng rp(21, 0, 3, Step::Phase), rn(21, 0, 3, Step::NearField);
        PhaseGrid ph = draw_phases(cs.N, cs.M, rp);
        SynthesisOptions ff;
        ff.fc = 10.0;
        ff.d3D = (ue - bs).norm();
        ff.c_DS = 3.91e-9;
        NearFieldGeometry g = source_distances(cs, ray_delays(cs, ff.c_DS, true), ff.d3D, 0.0, 1, 2.0, 2.0, rn, bs, ue);
        SynthesisOptions nf = ff;
        nf.near_field = &g;
        ChannelRealization A = synthesize(cs, tx, rx, ph, ff), B = synthesize(cs, tx, rx, ph, nf);
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < A.n_taps(); ++k)
            for (std::size_t i = 0; i < A.taps[k].size(); ++i)
            {
                num += std::norm(B.taps[k][i] - A.taps[k][i]);
                den += std::norm(A.taps[k][i]);
            }
        double rel = std::sqrt(num / den);
        if (range > 1e5)
            CHECK(rel < 1e-3);
        else if (range < 100.0)
            CHECK(rel > 1e-2);
    }
}

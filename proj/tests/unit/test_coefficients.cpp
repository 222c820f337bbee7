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
#include "fr3/largescale.hpp"
#include "fr3/smallscale.hpp"

#include <doctest.h>

#include <sstream>

using namespace fr3;

namespace
{
    ArrayEndpoint iso_line(int n, double lambda)
    {
        PanelArray a;
        a.N = n;
        a.pattern = ElementPattern::isotropic();
        return make_panel_endpoint(a, Vec3::Zero(), Orientation{}, lambda);
    }

    SmallScaleInputs inputs(bool los, int M)
    {
        SmallScaleInputs in;
        in.N = 12;
        in.M = M;
        in.los = los;
        in.lsp.DS = 80e-9;
        in.lsp.ASA = 40.0;
        in.lsp.ASD = 8.0;
        in.lsp.ZSA = 6.0;
        in.lsp.ZSD = 3.0;
        in.lsp.K = 6.0;
        in.r_tau = 2.3;
        in.spreads = {40.0, 8.0, 6.0, 3.0, 11.0, 5.0, 7.0, 1.0};
        return in;
    }

    double mean_energy(const ChannelRealization &H)
    {
        return std::pow(10.0, -coupling_loss(H) / 10.0);
    }
}

TEST_CASE("ray count oracle grid")
{
    // UMa LOS at the deployment edge for three carriers
    const double c_zsd = 3.0 / 8.0 * std::pow(10.0, 0.75 - 2.1 * 35.0 / 1000.0);
    struct Row
    {
        double fc;
        int M, M_t, M_AOD, M_ZOD;
    };
    for (Row r : {Row{6, 4, 2, 1, 2}, Row{9, 6, 2, 1, 3}, Row{24, 16, 1, 2, 8}})
    {
        RayCountConfig c;
        c.fc = r.fc;
        c.B = 3e8 / 1.5;
        c.D_h = 0.13;
        c.D_v = 1.49;
        c.c_DS = std::max(0.25, 6.5622 - 3.4084 * std::log10(r.fc)) * 1e-9;
        c.c_ASD = 5.0;
        c.c_ZSD = c_zsd;
        c.M_min = 3;
        c.M_max = 40;
        RayCount k = ray_count(c);
        CHECK(k.M == r.M);
        CHECK(k.M_t == r.M_t);
        CHECK(k.M_AOD == r.M_AOD);
        CHECK(k.M_ZOD == r.M_ZOD);
    }

    RayCountConfig c;
    c.c_DS = 10e-9;
    c.B = 400e6;
    c.D_h = c.D_v = 0.0;
    RayCount k = ray_count(c);
    CHECK(k.M_t == 8);
    CHECK(k.M == 20); // clamped up to M_min

    c.M_min = 0;
    CHECK_THROWS_AS(ray_count(c), std::invalid_argument);
    c.M_min = 20;
    c.B = 0.0;
    CHECK_THROWS_AS(ray_count(c), std::invalid_argument);
}

TEST_CASE("ray count clamps and grows with aperture")
{
    RayCountConfig c;
    c.c_DS = 5e-9;
    c.c_ASD = 5.0;
    c.c_ZSD = 3.0;
    c.M_min = 1;
    c.M_max = 1000;
    int last = 0;
    for (double D = 0.05; D < 3.0; D += 0.05)
    {
        c.D_h = c.D_v = D;
        int M = ray_count(c).M;
        CHECK(M >= last);
        last = M;
    }
    c.M_max = 40;
    CHECK(ray_count(c).M == 40);
}

TEST_CASE("sub-cluster map and ray delays")
{
    SubClusterMap m = sub_cluster_map();
    CHECK(m.rays[0].size() == 10);
    CHECK(m.rays[1].size() == 6);
    CHECK(m.rays[2].size() == 4);
    CHECK(m.delay_factor == std::array<double, 3>{0.0, 1.28, 2.56});

    ClusterSet cs = generate_cluster_set(inputs(false, 20), test::registry().scaling, 3, 0, 1);
    const double c_DS = 3.91e-9;
    RayGrid d = ray_delays(cs, c_DS, true);
    for (int n = 0; n < cs.N; ++n)
    {
        bool strong = n == cs.strongest[0] || n == cs.strongest[1];
        for (int i = 0; i < 3; ++i)
            for (int r : m.rays[i])
                CHECK(d[n][r] == doctest::Approx(cs.tau[n] + (strong ? m.delay_factor[i] * c_DS : 0.0)));
    }
    RayGrid flat = ray_delays(cs, c_DS, false);
    for (int n = 0; n < cs.N; ++n)
        for (double x : flat[n])
            CHECK(x == cs.tau[n]);
}

TEST_CASE("single-ray clusters carry their exact power")
{
    const double lambda = 3e8 / 7e9;
    ArrayEndpoint tx = iso_line(4, lambda), rx = iso_line(2, lambda);
    for (std::uint64_t link = 0; link < 20; ++link)
    {
        ClusterSet cs = generate_cluster_set(inputs(false, 1), test::registry().scaling, 11, 0, link);
        Rng rp(11, 0, link, Step::Phase);
        PhaseGrid ph = draw_phases(cs.N, cs.M, rp);
        SynthesisOptions o;
        ChannelRealization H = synthesize(cs, tx, rx, ph, o);
        CHECK(H.U == 2);
        CHECK(H.S == 4);
        CHECK(H.n_taps() == std::size_t(cs.N));
        CHECK(std::is_sorted(H.delays.begin(), H.delays.end()));
        CHECK(mean_energy(H) == doctest::Approx(1.0).epsilon(1e-12));
        for (std::size_t k = 0; k < H.n_taps(); ++k)
            for (int u = 0; u < 2; ++u)
                for (int s = 0; s < 4; ++s)
                    CHECK(std::norm(H.at(k, u, s, 0)) == doctest::Approx(cs.P[k]).epsilon(1e-9));
    }
}

TEST_CASE("synthesized channels are normalized on average")
{
    const double lambda = 3e8 / 7e9;
    ArrayEndpoint tx = iso_line(4, lambda), rx = iso_line(2, lambda);
    for (bool los : {false, true})
    {
        double acc = 0.0;
        const int L = 400;
        for (int link = 0; link < L; ++link)
        {
            ClusterSet cs = generate_cluster_set(inputs(los, 20), test::registry().scaling, 12, 0, link);
            Rng rp(12, 0, link, Step::Phase);
            SynthesisOptions o;
            o.c_DS = 3.91e-9;
            o.d3D = 150.0;
            o.los = {0.0, 0.0, 90.0, 90.0};
            ChannelRealization H = synthesize(cs, tx, rx, draw_phases(cs.N, cs.M, rp), o);
            acc += mean_energy(H);
        }
        CHECK(acc / L == doctest::Approx(1.0).epsilon(0.05));
    }
}

TEST_CASE("large-scale loss scales the energy")
{
    const double lambda = 3e8 / 7e9;
    ClusterSet cs = generate_cluster_set(inputs(false, 1), test::registry().scaling, 13, 0, 0);
    Rng rp(13, 0, 0, Step::Phase);
    ChannelRealization H = synthesize(cs, iso_line(2, lambda), iso_line(1, lambda), draw_phases(cs.N, 1, rp), {});
    LargeScaleResult ls;
    ls.total = 117.5;
    apply_large_scale(H, ls);
    CHECK(coupling_loss(H) == doctest::Approx(117.5).epsilon(1e-12));
}

TEST_CASE("CIR round trip")
{
    const double lambda = 3e8 / 7e9;
    ClusterSet cs = generate_cluster_set(inputs(true, 20), test::registry().scaling, 14, 0, 0);
    Rng rp(14, 0, 0, Step::Phase);
    SynthesisOptions o;
    o.times = {0.0, 1e-3, 2e-3};
    o.velocity = Vec3(3.0, 0.0, 0.0);
    o.c_DS = 3.91e-9;
    ChannelRealization H = synthesize(cs, iso_line(4, lambda), iso_line(2, lambda), draw_phases(cs.N, cs.M, rp), o);
    std::stringstream ss;
    write_cir(ss, H);
    ChannelRealization G = read_cir(ss);
    REQUIRE(G.U == H.U);
    REQUIRE(G.S == H.S);
    REQUIRE(G.T == 3);
    REQUIRE(G.n_taps() == H.n_taps());
    CHECK(G.fc == doctest::Approx(7.0));
    CHECK(G.delays == H.delays);
    for (std::size_t k = 0; k < H.n_taps(); ++k)
        for (std::size_t i = 0; i < H.taps[k].size(); ++i)
            CHECK(std::abs(G.taps[k][i] - H.taps[k][i]) <= 1e-6 * (1.0 + std::abs(H.taps[k][i])));

    std::stringstream bad("NOTACIR0");
    CHECK_THROWS_AS(read_cir(bad), std::invalid_argument);
}

TEST_CASE("absolute delay")
{
    const AbsDelayParams &sma = test::registry().abs_delay.at("SMa");
    AbsoluteDelay los = absolute_delay(sma, true, 300.0, std::nullopt, 1.0);
    CHECK(los.dtau == 0.0);
    CHECK(los.shift == doctest::Approx(1e-6));

    AbsoluteDelay med = absolute_delay(sma, false, 300.0, std::nullopt, 0.0);
    CHECK(med.dtau == doctest::Approx(1.9860949173573716e-08).epsilon(1e-12));
    CHECK(med.shift == doctest::Approx(1e-6 + med.dtau));

    const AbsDelayParams &inh = test::registry().abs_delay.at("InH");
    AbsoluteDelay cl = absolute_delay(inh, false, 10.0, 50.0, 40.0);
    CHECK(cl.clamped);
    CHECK(cl.dtau == doctest::Approx(3.3333333333333335e-07));

    // median of the lognormal is 10^mu
    Rng r(15, 0, 0, Step::Test);
    std::vector<double> v;
    for (int i = 0; i < 4001; ++i)
        v.push_back(absolute_delay(sma, false, 0.0, std::nullopt, r).dtau);
    std::nth_element(v.begin(), v.begin() + 2000, v.end());
    CHECK(v[2000] == doctest::Approx(1.986e-8).epsilon(0.06));
}

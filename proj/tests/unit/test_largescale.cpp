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

#include "fr3/field.hpp"
#include "fr3/geometry.hpp"
#include "fr3/largescale.hpp"

#include <doctest.h>

using namespace fr3;

namespace
{
    LinkGeometry geom(double d2D, double h_bs, double h_ue)
    {
        LinkGeometry g;
        g.d2D = d2D;
        g.h_BS = h_bs;
        g.h_UE = h_ue;
        g.d3D = std::hypot(d2D, h_bs - h_ue);
        return g;
    }

    PropagationState state(bool los)
    {
        PropagationState st;
        st.los = los;
        return st;
    }
}

TEST_CASE("suburban closed forms against the scripted oracle")
{
    CHECK(breakpoint_distance_sma(35.0, 1.5, 7.0) == doctest::Approx(7696.902001294993).epsilon(1e-12));
    CHECK(std::abs(sma_pl1(100.0, 7.0, 10.0) - 90.38342492273345) < 1e-9);
    CHECK(std::abs(sma_pl_nlos(1000.0, 7.0, 10.0, 10.0, 35.0, 1.5) - 141.18031317900267) < 1e-9);
    CHECK(std::abs(sma_pl1(1000.0, 7.0, 10.0) - 113.75784730348276) < 1e-9);
}

TEST_CASE("path-loss families of the shipped scenarios")
{
    const Registry &R = test::registry();
    CHECK(std::abs(path_loss(R.scenario("UMa"), geom(100, 25, 1.5), state(true), 7.0) - 89.158756590132) < 1e-9);
    CHECK(std::abs(path_loss(R.scenario("UMa"), geom(2000, 25, 1.5), state(true), 7.0) - 122.05671492576444) < 1e-9);
    CHECK(std::abs(path_loss(R.scenario("UMa"), geom(300, 25, 1.5), state(false), 7.0) - 127.29977206576751) < 1e-9);
    CHECK(std::abs(path_loss(R.scenario("UMi"), geom(150, 10, 1.5), state(false), 7.0) - 117.24118438433713) < 1e-9);
    CHECK(std::abs(path_loss(R.scenario("InH"), geom(30, 3, 1), state(false), 7.0) - 94.9535666399582) < 1e-9);

    const ScenarioParams &sma = R.scenario("SMa");
    // the far slope continues the near slope at the breakpoint (up to the d2D/d3D offset)
    double dbp = breakpoint_distance_sma(35.0, 1.5, 7.0);
    double lo = path_loss(sma, geom(dbp * (1 - 1e-9), 35, 1.5), state(true), 7.0, {false, nullptr});
    double hi = path_loss(sma, geom(dbp * (1 + 1e-9), 35, 1.5), state(true), 7.0, {false, nullptr});
    CHECK(std::abs(hi - lo) < 1e-3);

    for (const auto &[name, sc] : R.scenarios)
    {
        double hb = sc.get("h_bs"), prev_l = 0.0, prev_n = 0.0;
        for (double d = 10.0; d <= 5000.0; d *= 1.05)
        {
            double l = path_loss(sc, geom(d, hb, 1.5), state(true), 7.0);
            double n = path_loss(sc, geom(d, hb, 1.5), state(false), 7.0);
            CHECK_MESSAGE(n >= l, name << " d=" << d);
            CHECK_MESSAGE(l >= prev_l, name << " d=" << d);
            CHECK_MESSAGE(n >= prev_n, name << " d=" << d);
            prev_l = l;
            prev_n = n;
        }
    }
}

TEST_CASE("validity ranges")
{
    const ScenarioParams &sma = test::registry().scenario("SMa");
    bool oor = false;
    path_loss(sma, geom(6000, 35, 1.5), state(true), 7.0, {false, &oor});
    CHECK(oor);
    path_loss(sma, geom(600, 35, 1.5), state(true), 7.0, {false, &oor});
    CHECK_FALSE(oor);
    CHECK_THROWS_AS(path_loss(sma, geom(6000, 35, 1.5), state(true), 7.0, {true, nullptr}), std::invalid_argument);
    CHECK_THROWS_AS(path_loss(sma, geom(100, 35, 1.5), state(true), 0.0), std::invalid_argument);
}

TEST_CASE("penetration loss")
{
    const Registry &R = test::registry();
    CHECK(material_loss(R, "plywood", 10.0) == doctest::Approx(2.73).epsilon(1e-12));
    CHECK(material_loss(R, "plywood", 24.0) == doctest::Approx(5.11).epsilon(1e-12));
    CHECK_THROWS_AS(material_loss(R, "plywood", 200.0), std::invalid_argument);
    CHECK_THROWS_AS(material_loss(R, "cheese", 7.0), std::invalid_argument);

    Rng r(12, 0, 0, Step::Test);
    O2ILoss a = o2i_penetration(R, O2IModel::LowA, 7.0, 4.0, r);
    CHECK(std::abs(a.pl_tw - 7.541602352142808) < 1e-9);
    CHECK(a.pl_in == 2.0);
    CHECK(std::abs(o2i_penetration(R, O2IModel::Low, 7.0, 0.0, r).pl_tw - 13.617690438961386) < 1e-9);
    CHECK(std::abs(o2i_penetration(R, O2IModel::High, 7.0, 0.0, r).pl_tw - 31.357186749459917) < 1e-9);
    CHECK_THROWS_AS(o2i_penetration(R, O2IModel::None, 7.0, 1.0, r), std::invalid_argument);

    const int n = 50000;
    double s2 = 0.0;
    for (int i = 0; i < n; ++i)
    {
        double x = o2i_penetration(R, O2IModel::High, 7.0, 1.0, r).random;
        s2 += x * x;
    }
    CHECK(std::sqrt(s2 / n) == doctest::Approx(6.5).epsilon(0.02));
}

TEST_CASE("shadow fading and LSP back-transform")
{
    const ScenarioParams &sma = test::registry().scenario("SMa");
    ExprVars v{7.0, 100.0, 1.5, 35.0};
    CHECK(sf_sigma(sma, StateClass::LOS, v, false) == 4.0);
    CHECK(sf_sigma(sma, StateClass::LOS, v, true) == 6.0);
    CHECK(sf_sigma(sma, StateClass::NLOS, v, true) == 8.0);
    CHECK(beyond_breakpoint(sma, geom(8000, 35, 1.5), 7.0));
    CHECK_FALSE(beyond_breakpoint(sma, geom(7000, 35, 1.5), 7.0));

    std::array<double, LSP_COUNT> zero{};
    LspSet L = draw_lsps(sma, StateClass::LOS, zero, v);
    CHECK(L.DS == doctest::Approx(std::pow(10.0, -7.23)));
    CHECK(L.ASA == doctest::Approx(std::pow(10.0, 1.48)));
    CHECK(L.K == 9.0);
    CHECK(L.SF == 0.0);

    std::array<double, LSP_COUNT> big;
    big.fill(20.0);
    LspSet C = draw_lsps(sma, StateClass::NLOS, big, v);
    CHECK(C.ASA == 104.0);
    CHECK(C.ASD == 104.0);
    CHECK(C.ZSA == 52.0);
    CHECK(C.ZSD == 52.0);
    CHECK(C.K == 0.0);
}

TEST_CASE("correlated fields")
{
    CorrelatedField f(77, 0), g(77, 0);
    FieldKey k{0, StateClass::NLOS, 0};
    // query order does not change values
    double a = f.value(k, LSP_DS, 20.0, 130.3, -40.2);
    f.value(k, LSP_DS, 20.0, -500.0, 900.0);
    g.value(k, LSP_DS, 20.0, -500.0, 900.0);
    CHECK(g.value(k, LSP_DS, 20.0, 130.3, -40.2) == a);
    CHECK(f.value(k, LSP_DS, 20.0, 130.3, -40.2) == a);
    CHECK(f.value({1, StateClass::NLOS, 0}, LSP_DS, 20.0, 130.3, -40.2) != a);
    CHECK(CorrelatedField(78, 0).value(k, LSP_DS, 20.0, 130.3, -40.2) != a);

    // unit variance and exponential autocorrelation over a grid
    auto grid = f.grid(k, LSP_SF, 10.0, 0, 0, 400, 400);
    double m = 0.0, v = 0.0, c = 0.0;
    int nc = 0;
    for (double x : grid)
        m += x;
    m /= grid.size();
    for (double x : grid)
        v += (x - m) * (x - m);
    v /= grid.size();
    for (int y = 0; y < 400; ++y)
        for (int x = 0; x + 10 < 400; ++x, ++nc)
            c += (grid[y * 400 + x] - m) * (grid[y * 400 + x + 10] - m);
    CHECK(std::abs(m) < 0.1);
    CHECK(std::abs(v - 1.0) < 0.1);
    CHECK(std::abs(c / nc / v - std::exp(-1.0)) < 0.08);
    CHECK_THROWS_AS(field_kernel(0.0), std::invalid_argument);
}

TEST_CASE("square root of a correlation matrix")
{
    CorrMatrix C{};
    for (int i = 0; i < LSP_COUNT; ++i)
        C[i][i] = 1.0;
    C[LSP_DS][LSP_SF] = C[LSP_SF][LSP_DS] = -0.6;
    C[LSP_ASA][LSP_DS] = C[LSP_DS][LSP_ASA] = 0.8;
    C[LSP_ASA][LSP_SF] = C[LSP_SF][LSP_ASA] = -0.5;
    std::array<bool, LSP_COUNT> active;
    active.fill(true);
    CorrMatrix S = sqrt_correlation(C, active);
    for (int i = 0; i < LSP_COUNT; ++i)
        for (int j = 0; j < LSP_COUNT; ++j)
        {
            double x = 0.0;
            for (int k = 0; k < LSP_COUNT; ++k)
                x += S[i][k] * S[j][k];
            CHECK(x == doctest::Approx(C[i][j]).epsilon(1e-9));
        }

    // indefinite input: rows keep unit norm after clamping
    C[LSP_ASD][LSP_DS] = C[LSP_DS][LSP_ASD] = 0.9;
    C[LSP_ASD][LSP_ASA] = C[LSP_ASA][LSP_ASD] = -0.9;
    CorrMatrix T = sqrt_correlation(C, active);
    for (int i = 0; i < LSP_COUNT; ++i)
    {
        double n = 0.0;
        for (int k = 0; k < LSP_COUNT; ++k)
            n += T[i][k] * T[i][k];
        CHECK(n == doctest::Approx(1.0).epsilon(1e-12));
    }

    C[0][1] = 0.3;
    CHECK_THROWS_AS(sqrt_correlation(C, active), std::invalid_argument);
}

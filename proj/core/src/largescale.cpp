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

#include "fr3/largescale.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fr3
{
    double breakpoint_distance_sma(double h_bs, double h_ue, double fc_ghz)
    {
        return 2.0 * std::numbers::pi * h_bs * h_ue * fc_ghz * 1e9 / speed_of_light;
    }

    double sma_pl1(double d3D, double fc_ghz, double h)
    {
        double h172 = std::pow(h, 1.72);
        return 20.0 * std::log10(40.0 * std::numbers::pi * d3D * fc_ghz / 3.0) +
               std::min(0.03 * h172, 10.0) * std::log10(d3D) - std::min(0.044 * h172, 14.77) +
               0.002 * std::log10(h) * d3D;
    }

    double sma_pl_nlos(double d3D, double fc_ghz, double W, double h, double h_bs, double h_ue)
    {
        double l = std::log10(11.75 * h_ue);
        return 161.04 - 7.1 * std::log10(W) + 7.5 * std::log10(h) -
               (24.37 - 3.7 * (h / h_bs) * (h / h_bs)) * std::log10(h_bs) +
               (43.42 - 3.1 * std::log10(h_bs)) * (std::log10(d3D) - 3.0) + 20.0 * std::log10(fc_ghz) -
               (3.2 * l * l - 4.97);
    }

    namespace
    {
        double urban_breakpoint(double h_bs, double h_ue, double fc_ghz, double h_e)
        {
            return 4.0 * (h_bs - h_e) * (h_ue - h_e) * fc_ghz * 1e9 / speed_of_light;
        }

        double los_pl(const ScenarioParams &sc, const std::string &model, const LinkGeometry &g, double fc)
        {
            double d3 = g.d3D, d2 = g.d2D, hb = g.h_BS, hu = g.h_UE;
            if (model == "sma")
            {
                double h = sc.get("env_h");
                double dbp = breakpoint_distance_sma(hb, hu, fc);
                if (d2 <= dbp)
                    return sma_pl1(d3, fc, h);
                return sma_pl1(dbp, fc, h) + 40.0 * std::log10(d3 / dbp);
            }
            if (model == "uma" || model == "umi")
            {
                bool uma = model == "uma";
                double dbp = urban_breakpoint(hb, hu, fc, sc.get_or("h_e", 1.0));
                double a = uma ? 28.0 : 32.4, b = uma ? 22.0 : 21.0, c = uma ? 9.0 : 9.5;
                if (d2 <= dbp)
                    return a + b * std::log10(d3) + 20.0 * std::log10(fc);
                return a + 40.0 * std::log10(d3) + 20.0 * std::log10(fc) - c * std::log10(dbp * dbp + (hb - hu) * (hb - hu));
            }
            if (model == "inh")
                return 32.4 + 17.3 * std::log10(d3) + 20.0 * std::log10(fc);
            if (model == "generic")
                return sc.get("pl_A", StateClass::LOS) + sc.get("pl_B", StateClass::LOS) * std::log10(d3) +
                       sc.get("pl_C", StateClass::LOS) * std::log10(fc) + sc.get_or("pl_G", 0.0);
            throw DataError("scenario " + sc.name + ": unknown pl_model '" + model + "'");
        }

        double nlos_pl(const ScenarioParams &sc, const std::string &model, const LinkGeometry &g, double fc)
        {
            double d3 = g.d3D, hb = g.h_BS, hu = g.h_UE;
            if (model == "sma")
                return sma_pl_nlos(d3, fc, sc.get("env_w"), sc.get("env_h"), hb, hu);
            if (model == "uma")
                return 13.54 + 39.08 * std::log10(d3) + 20.0 * std::log10(fc) - 0.6 * (hu - 1.5);
            if (model == "umi")
                return 22.4 + 35.3 * std::log10(d3) + 21.3 * std::log10(fc) - 0.3 * (hu - 1.5);
            if (model == "inh")
                return 17.30 + 38.3 * std::log10(d3) + 24.9 * std::log10(fc);
            if (model == "generic")
                return sc.get("pl_A", StateClass::NLOS) + sc.get("pl_B", StateClass::NLOS) * std::log10(d3) +
                       sc.get("pl_C", StateClass::NLOS) * std::log10(fc) + sc.get_or("pl_G", 0.0);
            throw DataError("scenario " + sc.name + ": unknown pl_model '" + model + "'");
        }
    }

    double path_loss(const ScenarioParams &sc, const LinkGeometry &g, const PropagationState &st, double fc_ghz,
                     const PathLossOptions &opt)
    {
        if (!(g.d3D > 0.0) || g.d2D < 0.0)
            throw std::invalid_argument("path_loss: non-positive distance");
        if (!(fc_ghz > 0.0))
            throw std::invalid_argument("path_loss: non-positive frequency");

        bool in_range = true;
        if (sc.has("pl_d2d_min") && g.d2D < sc.get("pl_d2d_min"))
            in_range = false;
        if (sc.has("pl_d2d_max") && g.d2D > sc.get("pl_d2d_max"))
            in_range = false;
        if (sc.has("pl_fc_min") && fc_ghz < sc.get("pl_fc_min"))
            in_range = false;
        if (sc.has("pl_fc_max") && fc_ghz > sc.get("pl_fc_max"))
            in_range = false;
        if (!in_range && opt.strict)
            throw std::invalid_argument("path_loss: geometry outside the validity range of scenario " + sc.name);
        if (opt.out_of_range)
            *opt.out_of_range = !in_range;

        // Inside the breakpoint-free region the formulas use a distance of at least 1 m
        LinkGeometry gg = g;
        gg.d3D = std::max(g.d3D, 1.0);

        const std::string model = sc.text("pl_model");
        double los = los_pl(sc, model, gg, fc_ghz);
        if (st.los)
            return los;
        double nlos = nlos_pl(sc, model, gg, fc_ghz);
        bool floor = sc.get_or("pl_nlos_floor", 1.0) != 0.0;
        return floor ? std::max(los, nlos) : nlos;
    }

    bool beyond_breakpoint(const ScenarioParams &sc, const LinkGeometry &g, double fc_ghz)
    {
        const std::string model = sc.text("pl_model");
        if (model == "sma")
            return g.d2D > breakpoint_distance_sma(g.h_BS, g.h_UE, fc_ghz);
        if (model == "uma" || model == "umi")
            return g.d2D > urban_breakpoint(g.h_BS, g.h_UE, fc_ghz, sc.get_or("h_e", 1.0));
        return false;
    }

    double material_loss(const Registry &R, const std::string &material, double fc_ghz)
    {
        auto it = R.materials.find(material);
        if (it == R.materials.end())
            throw std::invalid_argument("material_loss: unknown material '" + material + "'");
        if (fc_ghz < 0.5 || fc_ghz > 100.0)
            throw std::invalid_argument("material_loss: frequency outside [0.5, 100] GHz");
        return it->second.intercept + it->second.slope * fc_ghz;
    }

    O2ILoss o2i_penetration(const Registry &R, O2IModel model, double fc_ghz, double d2D_in, Rng &rng)
    {
        if (d2D_in < 0.0)
            throw std::invalid_argument("o2i_penetration: negative indoor distance");
        if (model == O2IModel::None)
            throw std::invalid_argument("o2i_penetration: no O2I model for an outdoor link");
        auto it = R.o2i_models.find(o2i_name(model));
        if (it == R.o2i_models.end())
            throw std::invalid_argument(std::string("o2i_penetration: unknown model '") + o2i_name(model) + "'");
        const O2IModelParams &m = it->second;
        double la = material_loss(R, m.material_a, fc_ghz), lb = material_loss(R, m.material_b, fc_ghz);
        O2ILoss out;
        out.pl_tw = 5.0 - 10.0 * std::log10(m.weight_a * std::pow(10.0, -la / 10.0) + m.weight_b * std::pow(10.0, -lb / 10.0));
        out.pl_in = 0.5 * d2D_in;
        out.random = rng.normal(0.0, m.sigma_p);
        return out;
    }

    double sf_sigma(const ScenarioParams &sc, StateClass s, const ExprVars &v, bool beyond_bp)
    {
        if (beyond_bp && sc.has("sf_sigma_bp", s))
            return sc.get("sf_sigma_bp", s, v);
        return sc.get("sf_sigma", s, v);
    }

    LspSet draw_lsps(const ScenarioParams &sc, StateClass s, const std::array<double, LSP_COUNT> &n, const ExprVars &v,
                     bool beyond_bp)
    {
        auto lognormal = [&](const char *mu, const char *sigma, double x)
        { return std::pow(10.0, x * sc.get(sigma, s, v) + sc.get(mu, s, v)); };

        LspSet L;
        L.DS = lognormal("ds_mu", "ds_sigma", n[LSP_DS]);
        L.ASD = std::min(lognormal("asd_mu", "asd_sigma", n[LSP_ASD]), 104.0);
        L.ASA = std::min(lognormal("asa_mu", "asa_sigma", n[LSP_ASA]), 104.0);
        L.ZSD = std::min(lognormal("zsd_mu", "zsd_sigma", n[LSP_ZSD]), 52.0);
        L.ZSA = std::min(lognormal("zsa_mu", "zsa_sigma", n[LSP_ZSA]), 52.0);
        L.SF = n[LSP_SF] * sf_sigma(sc, s, v, beyond_bp);
        L.K = (s == StateClass::LOS) ? n[LSP_K] * sc.get("k_sigma", s, v) + sc.get("k_mu", s, v) : 0.0;
        return L;
    }
}

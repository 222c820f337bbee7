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

#ifndef FR3_LARGESCALE_HPP
#define FR3_LARGESCALE_HPP

#include "fr3/geometry.hpp"
#include "fr3/rng.hpp"
#include "fr3/scenario.hpp"

#include <array>
#include <string>

namespace fr3
{
    struct LargeScaleResult
    {
        double pl_outdoor = 0.0;
        double pl_tw = 0.0;
        double pl_in = 0.0;
        double sf = 0.0;
        double penetration_random = 0.0;
        double total = 0.0;

        void update_total() { total = pl_outdoor + pl_tw + pl_in + penetration_random + sf; }
    };

    struct LspSet
    {
        double DS = 0.0;                                 // s
        double ASD = 0.0, ASA = 0.0, ZSD = 0.0, ZSA = 0.0; // degrees
        double K = 0.0;                                  // dB, meaningful for LOS only
        double SF = 0.0;                                 // dB
    };

    struct PathLossOptions
    {
        bool strict = false;          // throw instead of extrapolating outside the validity range
        bool *out_of_range = nullptr; // set when the geometry is outside the validity range
    };

    // Breakpoint distance 2*pi*hBS*hUE*fc/c (fc in GHz, converted to Hz)
    double breakpoint_distance_sma(double h_bs, double h_ue, double fc_ghz);

    // Street-canyon LOS first slope of the SMa/RMa family
    double sma_pl1(double d3D, double fc_ghz, double h);

    // SMa/RMa NLOS closed form (without the LOS floor)
    double sma_pl_nlos(double d3D, double fc_ghz, double W, double h, double h_bs, double h_ue);

    double path_loss(const ScenarioParams &sc, const LinkGeometry &g, const PropagationState &st, double fc_ghz,
                     const PathLossOptions &opt = {});

    // True when d2D lies beyond the LOS breakpoint (selects the second shadow-fading sigma where tabulated)
    bool beyond_breakpoint(const ScenarioParams &sc, const LinkGeometry &g, double fc_ghz);

    double material_loss(const Registry &R, const std::string &material, double fc_ghz);

    struct O2ILoss
    {
        double pl_tw = 0.0, pl_in = 0.0, random = 0.0;
    };

    O2ILoss o2i_penetration(const Registry &R, O2IModel model, double fc_ghz, double d2D_in, Rng &rng);

    // Shadow-fading sigma for the state, respecting an optional beyond-breakpoint entry
    double sf_sigma(const ScenarioParams &sc, StateClass s, const ExprVars &v, bool beyond_bp);

    // Back-transform of correlated standard normals (index by Lsp) into an LspSet
    LspSet draw_lsps(const ScenarioParams &sc, StateClass s, const std::array<double, LSP_COUNT> &normals,
                     const ExprVars &v, bool beyond_bp = false);
}

#endif

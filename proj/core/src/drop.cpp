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

#include "fr3/drop.hpp"

#include <cmath>
#include <stdexcept>

namespace fr3
{
    namespace
    {
        constexpr int max_attempts = 100000;

        bool inside_hex_cell(double x, double y, double isd)
        {
            for (int k = 0; k < 6; ++k)
            {
                double a = k * 60.0 * deg2rad;
                if (x * std::cos(a) + y * std::sin(a) > 0.5 * isd)
                    return false;
            }
            return true;
        }

        Vec3 sample_position(const SiteLayout &L, double min_d2d, Rng &rng)
        {
            if (L.sites.empty())
                throw std::invalid_argument("drop_ue: layout has no sites");

            if (L.kind == LayoutKind::Single)
            {
                double rmin = std::max(0.0, min_d2d);
                if (rmin > L.radius || !(L.radius > 0.0))
                    throw std::invalid_argument("drop_ue: infeasible minimum distance for the deployment radius");
                const Site &s = L.sites[0];
                double r = std::sqrt(rng.uniform(rmin * rmin, L.radius * L.radius));
                double a = (s.sectors[0].alpha + rng.uniform(-L.half_angle, L.half_angle)) * deg2rad;
                return {s.position.x() + r * std::cos(a), s.position.y() + r * std::sin(a), 0.0};
            }

            for (int attempt = 0; attempt < max_attempts; ++attempt)
            {
                Vec3 p;
                if (L.kind == LayoutKind::Hex)
                {
                    std::size_t site = std::size_t(rng.uniform_int(0, int(L.sites.size()) - 1));
                    double R = L.isd / std::sqrt(3.0);
                    double x, y;
                    do
                    {
                        x = rng.uniform(-0.5 * L.isd, 0.5 * L.isd);
                        y = rng.uniform(-R, R);
                    } while (!inside_hex_cell(x, y, L.isd));
                    p = Vec3(L.sites[site].position.x() + x, L.sites[site].position.y() + y, 0.0);
                }
                else
                    p = Vec3(rng.uniform(0.0, L.width), rng.uniform(0.0, L.depth), 0.0);

                bool ok = true;
                for (std::size_t s = 0; s < L.sites.size() && ok; ++s)
                    ok = wrapped_distance_2d(L, p, s) >= min_d2d;
                if (ok)
                    return p;
            }
            throw std::invalid_argument("drop_ue: infeasible minimum distance (area exhausted)");
        }
    }

    UE drop_ue(const SiteLayout &layout, const ScenarioParams &sc, Rng &rng, const DropOptions &opt)
    {
        double min_d2d = opt.min_d2d ? *opt.min_d2d : sc.get("min_d2d");
        UE ue;
        ue.position = sample_position(layout, min_d2d, rng);

        double u_in = rng.uniform(), u_bld = rng.uniform(), u_car = rng.uniform();
        ue.indoor = opt.force_indoor ? *opt.force_indoor : (u_in < sc.get("indoor_ratio"));
        if (ue.indoor)
            ue.building = u_bld < sc.get_or("commercial_ratio", 1.0) ? Building::Commercial : Building::Residential;
        ue.in_car = !ue.indoor && u_car < sc.get_or("in_car_ratio", 0.0);

        const std::string model = sc.text_or("height_model", "fixed");
        double fh = sc.get_or("floor_height", 3.0);
        double h = sc.get_or("h_ue_fixed", 1.5);
        if (model == "sma")
        {
            if (ue.indoor)
            {
                int top = ue.building == Building::Commercial ? int(sc.get("floors_com_max")) : int(sc.get("floors_res_max"));
                ue.floor = rng.uniform_int(1, top);
                h = 1.5 + fh * (ue.floor - 1);
            }
            else
                h = 1.5;
        }
        else if (model == "urban")
        {
            if (ue.indoor)
            {
                int n_fl = rng.uniform_int(int(sc.get("n_fl_min")), int(sc.get("n_fl_max")));
                ue.floor = rng.uniform_int(1, n_fl);
                h = 1.5 + fh * (ue.floor - 1);
            }
            else
                h = 1.5;
        }
        else if (model != "fixed")
            throw DataError("scenario " + sc.name + ": unknown height_model '" + model + "'");

        ue.position.z() = opt.h_ue ? *opt.h_ue : h;
        return ue;
    }

    std::vector<UE> drop_ues(const SiteLayout &layout, std::size_t count, const ScenarioParams &sc, Rng &rng,
                             const DropOptions &opt)
    {
        std::vector<UE> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i)
            out.push_back(drop_ue(layout, sc, rng, opt));
        return out;
    }

    std::vector<UE> drop_ues(const SiteLayout &layout, std::size_t count, const ScenarioParams &sc, std::uint64_t seed,
                             std::uint64_t drop, const DropOptions &opt)
    {
        std::vector<UE> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i)
        {
            Rng rng(seed, drop, i, Step::Drop);
            out.push_back(drop_ue(layout, sc, rng, opt));
        }
        return out;
    }
}

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

#ifndef FR3_DROP_HPP
#define FR3_DROP_HPP

#include "fr3/geometry.hpp"
#include "fr3/rng.hpp"
#include "fr3/scenario.hpp"

#include <optional>
#include <vector>

namespace fr3
{
    struct UE
    {
        Vec3 position = Vec3::Zero(); // z is the antenna height
        bool indoor = false;
        bool in_car = false;
        Building building = Building::None;
        int floor = 1;
    };

    struct DropOptions
    {
        std::optional<bool> force_indoor;
        std::optional<double> h_ue;
        std::optional<double> min_d2d; // overrides the scenario min_d2d
    };

    // Draw one UE. Draw order: position (rejection loop), indoor, building type, in-car, floor(s).
    UE drop_ue(const SiteLayout &layout, const ScenarioParams &sc, Rng &rng, const DropOptions &opt = {});

    // Draw count UEs from a single stream
    std::vector<UE> drop_ues(const SiteLayout &layout, std::size_t count, const ScenarioParams &sc, Rng &rng,
                             const DropOptions &opt = {});

    // Draw count UEs, UE i using substream (seed, drop, i, Step::Drop)
    std::vector<UE> drop_ues(const SiteLayout &layout, std::size_t count, const ScenarioParams &sc, std::uint64_t seed,
                             std::uint64_t drop, const DropOptions &opt = {});
}

#endif

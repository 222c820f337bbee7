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

#ifndef FR3_FIELD_HPP
#define FR3_FIELD_HPP

#include "fr3/scenario.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <tuple>
#include <vector>

namespace fr3
{
    // 2-D FIR kernel whose filtered white noise has autocorrelation exp(-d/dcor)
    struct FieldKernel
    {
        double dcor = 0.0;
        int radius = 0; // taps span [-radius, radius] in both axes (1 m cells)
        std::vector<double> taps; // (2*radius+1)^2, row-major (y, x)
    };

    // Shared, thread-safe kernel cache keyed by correlation distance
    const FieldKernel &field_kernel(double dcor);

    // Identifies an independent random field
    struct FieldKey
    {
        std::uint32_t site = 0;
        StateClass state = StateClass::LOS;
        std::int32_t floor = 0;
        auto tie() const { return std::make_tuple(site, int(state), floor); }
        bool operator<(const FieldKey &o) const { return tie() < o.tie(); }
    };

    // Extra field channel index for the absolute-delay parameter
    inline constexpr int FIELD_DTAU = LSP_COUNT;

    /*!
    Lazily evaluated spatially correlated Gaussian fields on a 1 m grid.

    The white-noise grid is generated in 64x64 tiles; every tile owns a substream derived from
    (seed, drop, key, channel, tile), so a field value depends only on its inputs and not on the
    order in which points are queried. Instances hold a tile cache and are not thread safe;
    use one instance per worker.
    */
    class CorrelatedField
    {
    public:
        CorrelatedField(std::uint64_t seed, std::uint64_t drop) : seed_(seed), drop_(drop) {}

        // Unit-variance field value of a channel at (x, y) in meters
        double value(const FieldKey &key, int channel, double dcor, double x, double y);

        // Row-major ny x nx samples starting at integer cell (x0, y0)
        std::vector<double> grid(const FieldKey &key, int channel, double dcor, int x0, int y0, int nx, int ny);

        void clear() { tiles_.clear(); }

    private:
        static constexpr int tile = 64;
        using TileId = std::tuple<std::uint32_t, int, std::int32_t, int, std::int64_t, std::int64_t>;
        const std::vector<float> &noise_tile(const FieldKey &key, int channel, std::int64_t tx, std::int64_t ty);
        double noise(const FieldKey &key, int channel, std::int64_t cx, std::int64_t cy);

        std::uint64_t seed_, drop_;
        std::map<TileId, std::vector<float>> tiles_;
    };

    using CorrMatrix = std::array<std::array<double, LSP_COUNT>, LSP_COUNT>;

    // Square root of a correlation matrix over the active channels (inactive rows/cols are left as identity).
    // Negative eigenvalues are clamped to zero and rows are rescaled to unit norm.
    CorrMatrix sqrt_correlation(const CorrMatrix &C, const std::array<bool, LSP_COUNT> &active);

    // Correlated standard normals for one UE: per-channel field values mixed by sqrt(C)
    std::array<double, LSP_COUNT> correlated_normals(CorrelatedField &f, const ScenarioParams &sc, StateClass s,
                                                     const FieldKey &key, double x, double y, const ExprVars &v);
}

#endif

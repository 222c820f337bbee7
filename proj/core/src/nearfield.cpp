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

#include "fr3/nearfield.hpp"

#include <cmath>
#include <stdexcept>

namespace fr3
{
    NearFieldGeometry source_distances(const ClusterSet &cs, const RayGrid &ray_delay, double d3D, double dtau,
                                       int N_spec, double alpha, double beta, Rng &rng, const Vec3 &tx_reference,
                                       const Vec3 &rx_reference)
    {
        if (!(alpha > 0.0) || !(beta > 0.0))
            throw std::invalid_argument("source_distances: Beta parameters must be positive");
        if (N_spec < 0)
            throw std::invalid_argument("source_distances: negative specular count");
        if (int(ray_delay.size()) != cs.N)
            throw std::invalid_argument("source_distances: ray delay grid does not match the cluster count");

        NearFieldGeometry g;
        g.N_spec = N_spec;
        g.alpha = alpha;
        g.beta = beta;
        g.s_bs.resize(cs.N);
        g.d1.resize(cs.N);
        g.d2.resize(cs.N);
        g.p_tx.resize(cs.N);
        g.p_rx.resize(cs.N);
        for (int n = 0; n < cs.N; ++n)
        {
            const bool specular = n < N_spec;
            g.s_bs[n] = specular ? 1.0 : rng.beta(alpha, beta);
            const int M = int(ray_delay[n].size());
            g.d1[n].resize(M);
            g.d2[n].resize(M);
            g.p_tx[n].resize(M);
            g.p_rx[n].resize(M);
            for (int m = 0; m < M; ++m)
            {
                double total = d3D + (ray_delay[n][m] + dtau) * speed_of_light;
                g.d1[n][m] = g.s_bs[n] * total;
                g.d2[n][m] = specular ? total : (1.0 - g.s_bs[n]) * total;
                g.p_tx[n][m] = tx_reference + g.d1[n][m] * direction(cs.ray_zod[n][m], cs.ray_aod[n][m]);
                g.p_rx[n][m] = rx_reference + g.d2[n][m] * direction(cs.ray_zoa[n][m], cs.ray_aoa[n][m]);
            }
        }
        return g;
    }

    std::complex<double> los_element_phase(const Vec3 &tx_element, const Vec3 &rx_element, double lambda)
    {
        double r = (rx_element - tx_element).norm();
        return std::polar(1.0, -2.0 * std::numbers::pi * r / lambda);
    }

    std::complex<double> nlos_element_phase(const Vec3 &offset, double d, const Vec3 &r, double lambda)
    {
        if (!(d > 0.0))
            throw std::invalid_argument("nlos_element_phase: source distance must be positive");
        // d - |d r - o| rewritten without cancellation for sources far from the array
        double e = (2.0 * d * r.dot(offset) - offset.squaredNorm()) / (d + (d * r - offset).norm());
        return std::polar(1.0, 2.0 * std::numbers::pi * e / lambda);
    }

    ElementAngles element_wise_angles(const Vec3 &source, const Vec3 &element)
    {
        Vec3 v = source - element;
        if (v.norm() == 0.0)
            throw std::invalid_argument("element_wise_angles: source coincides with the element");
        ElementAngles a;
        angles_of(v, a.zenith, a.azimuth);
        return a;
    }
}

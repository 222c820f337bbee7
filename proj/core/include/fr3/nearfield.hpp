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

#ifndef FR3_NEARFIELD_HPP
#define FR3_NEARFIELD_HPP

#include "fr3/geometry.hpp"
#include "fr3/rng.hpp"
#include "fr3/smallscale.hpp"

#include <complex>
#include <vector>

namespace fr3
{
    // Spherical-wave sources of every ray
    struct NearFieldGeometry
    {
        std::vector<double> s_bs;        // per cluster
        RayGrid d1, d2;                  // BS-side and UE-side source distances, m
        std::vector<std::vector<Vec3>> p_tx, p_rx; // source points, GCS
        int N_spec = 0;
        double alpha = 2.0, beta = 2.0;
    };

    /*!
    Source distances for every ray. ray_delay holds the delay of each ray (sub-cluster offsets included).
    The path length is d3D + (tau + dtau) * c; specular clusters (the N_spec earliest) put both sources at
    that distance, the others split it as s and 1 - s with s ~ Beta(alpha, beta) drawn once per cluster.
    */
    NearFieldGeometry source_distances(const ClusterSet &cs, const RayGrid &ray_delay, double d3D, double dtau,
                                       int N_spec, double alpha, double beta, Rng &rng, const Vec3 &tx_reference,
                                       const Vec3 &rx_reference);

    // exp(-j 2 pi |r| / lambda) for the exact distance between a TX and an RX element
    std::complex<double> los_element_phase(const Vec3 &tx_element, const Vec3 &rx_element, double lambda);

    // exp(j 2 pi (d - |d r - offset|) / lambda)
    std::complex<double> nlos_element_phase(const Vec3 &offset, double d, const Vec3 &r, double lambda);

    struct ElementAngles
    {
        double azimuth = 0.0, zenith = 0.0; // degrees
    };

    // Direction from an element to a spherical-wave source
    ElementAngles element_wise_angles(const Vec3 &source, const Vec3 &element);
}

#endif

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

#ifndef FR3_ANTENNA_HPP
#define FR3_ANTENNA_HPP

#include "fr3/geometry.hpp"

#include <string>
#include <utility>
#include <vector>

namespace fr3
{
    struct ElementPattern
    {
        double phi_3dB = 65.0;   // degrees
        double theta_3dB = 65.0; // degrees
        double A_max = 30.0;     // dB
        double SLA_V = 30.0;     // dB
        double max_gain = 8.0;   // dBi
        double slant = 0.0;      // polarization slant zeta, degrees

        static ElementPattern isotropic(double slant_deg = 0.0);
        void validate() const;
    };

    struct FieldPair
    {
        double theta = 0.0;
        double phi = 0.0;
    };

    struct PanelArray
    {
        int Mg = 1, Ng = 1;  // panel rows / columns
        int M = 1, N = 1;    // element rows (vertical) / columns (horizontal) per panel
        int P = 1;           // polarizations
        double d_H = 0.5, d_V = 0.5;   // element spacing in wavelengths
        double d_gH = 0.0, d_gV = 0.0; // panel spacing in wavelengths, 0 selects N*d_H / M*d_V
        ElementPattern pattern;
        double slant_1 = 0.0, slant_2 = 90.0; // slants for P = 2

        std::size_t size() const { return std::size_t(Mg) * Ng * M * N * P; }
        void validate() const;
    };

    enum class DeviceKind
    {
        Handheld,
        CPE
    };

    struct UEDevice
    {
        DeviceKind kind = DeviceKind::Handheld;
        double X = 15.0, Y = 7.0, Z = 0.0; // cm
        std::vector<std::size_t> selected;  // empty selects every candidate

        static UEDevice handheld();
        static UEDevice cpe();
    };

    struct CandidateLocation
    {
        Vec3 offset;             // m, device frame
        Orientation orientation; // outward radial
    };

    // Relative power pattern A'' in dB (<= 0)
    double element_power_pattern(const ElementPattern &p, double zenith_deg, double azimuth_deg);

    // Field components in the element LCS, including max_gain
    FieldPair field_pattern_lcs(const ElementPattern &p, double zenith_deg, double azimuth_deg);

    // Field components in the GCS for an element mounted with orientation o
    FieldPair field_pattern(const ElementPattern &p, const Orientation &o, double zenith_deg, double azimuth_deg);

    // Element positions in the array LCS (boresight +x, columns along y, rows along z), centered on the origin.
    // Order: panel row, panel column, element row, element column, polarization (fastest).
    std::vector<Vec3> element_positions(const PanelArray &a, double wavelength);

    // Slant per element in the same order as element_positions
    std::vector<double> element_slants(const PanelArray &a);

    // Total array extent (W horizontal, H vertical) in meters, span plus one element spacing
    std::pair<double, double> array_extent(const PanelArray &a, double wavelength);

    std::vector<CandidateLocation> ue_candidate_locations(const UEDevice &d);
}

#endif

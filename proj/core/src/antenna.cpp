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

#include "fr3/antenna.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fr3
{
    ElementPattern ElementPattern::isotropic(double slant_deg)
    {
        ElementPattern p;
        p.A_max = 0.0;
        p.SLA_V = 0.0;
        p.max_gain = 0.0;
        p.slant = slant_deg;
        return p;
    }

    void ElementPattern::validate() const
    {
        if (!(phi_3dB > 0.0) || !(theta_3dB > 0.0))
            throw std::invalid_argument("ElementPattern: beamwidths must be positive");
        if (A_max < 0.0 || SLA_V < 0.0)
            throw std::invalid_argument("ElementPattern: A_max and SLA_V must be non-negative");
    }

    void PanelArray::validate() const
    {
        if (Mg < 1 || Ng < 1 || M < 1 || N < 1)
            throw std::invalid_argument("PanelArray: element and panel counts must be at least 1");
        if (P != 1 && P != 2)
            throw std::invalid_argument("PanelArray: P must be 1 or 2");
        if (!(d_H > 0.0) || !(d_V > 0.0) || d_gH < 0.0 || d_gV < 0.0)
            throw std::invalid_argument("PanelArray: spacings must be positive");
        pattern.validate();
    }

    UEDevice UEDevice::handheld() { return UEDevice{}; }

    UEDevice UEDevice::cpe()
    {
        UEDevice d;
        d.kind = DeviceKind::CPE;
        d.X = 0.0;
        d.Y = 20.0;
        d.Z = 20.0;
        return d;
    }

    double element_power_pattern(const ElementPattern &p, double zenith_deg, double azimuth_deg)
    {
        double phi = wrap_azimuth(azimuth_deg);
        double av = -std::min(12.0 * std::pow((zenith_deg - 90.0) / p.theta_3dB, 2), p.SLA_V);
        double ah = -std::min(12.0 * std::pow(phi / p.phi_3dB, 2), p.A_max);
        return -std::min(-(av + ah), p.A_max);
    }

    FieldPair field_pattern_lcs(const ElementPattern &p, double zenith_deg, double azimuth_deg)
    {
        double a_db = element_power_pattern(p, zenith_deg, azimuth_deg) + p.max_gain;
        double amp = std::sqrt(std::pow(10.0, 0.1 * a_db));
        double z = p.slant * deg2rad;
        return {amp * std::cos(z), amp * std::sin(z)};
    }

    FieldPair field_pattern(const ElementPattern &p, const Orientation &o, double zenith_deg, double azimuth_deg)
    {
        LcsAngles l = gcs_to_lcs(o, zenith_deg, azimuth_deg);
        FieldPair f = field_pattern_lcs(p, l.zenith, l.azimuth);
        double c = std::cos(l.psi * deg2rad), s = std::sin(l.psi * deg2rad);
        return {c * f.theta - s * f.phi, s * f.theta + c * f.phi};
    }

    std::vector<Vec3> element_positions(const PanelArray &a, double wavelength)
    {
        a.validate();
        if (!(wavelength > 0.0))
            throw std::invalid_argument("element_positions: wavelength must be positive");

        double dgH = (a.d_gH > 0.0 ? a.d_gH : a.N * a.d_H) * wavelength;
        double dgV = (a.d_gV > 0.0 ? a.d_gV : a.M * a.d_V) * wavelength;
        double dH = a.d_H * wavelength, dV = a.d_V * wavelength;

        std::vector<Vec3> pos;
        pos.reserve(a.size());
        for (int pr = 0; pr < a.Mg; ++pr)
            for (int pc = 0; pc < a.Ng; ++pc)
                for (int m = 0; m < a.M; ++m)
                    for (int n = 0; n < a.N; ++n)
                    {
                        double y = (pc - 0.5 * (a.Ng - 1)) * dgH + (n - 0.5 * (a.N - 1)) * dH;
                        double z = (pr - 0.5 * (a.Mg - 1)) * dgV + (m - 0.5 * (a.M - 1)) * dV;
                        for (int p = 0; p < a.P; ++p)
                            pos.emplace_back(0.0, y, z);
                    }
        return pos;
    }

    std::vector<double> element_slants(const PanelArray &a)
    {
        std::vector<double> s(a.size());
        for (std::size_t i = 0; i < s.size(); ++i)
            s[i] = (a.P == 2 && (i % 2) == 1) ? a.slant_2 : a.slant_1;
        return s;
    }

    std::pair<double, double> array_extent(const PanelArray &a, double wavelength)
    {
        auto pos = element_positions(a, wavelength);
        double ymin = 1e300, ymax = -1e300, zmin = 1e300, zmax = -1e300;
        for (const auto &p : pos)
        {
            ymin = std::min(ymin, p.y());
            ymax = std::max(ymax, p.y());
            zmin = std::min(zmin, p.z());
            zmax = std::max(zmax, p.z());
        }
        return {ymax - ymin + a.d_H * wavelength, zmax - zmin + a.d_V * wavelength};
    }

    std::vector<CandidateLocation> ue_candidate_locations(const UEDevice &d)
    {
        std::vector<CandidateLocation> all;
        if (d.kind == DeviceKind::Handheld)
        {
            double hx = 0.005 * d.X, hy = 0.005 * d.Y; // cm to m, half size
            // perimeter walk, counter-clockwise from +x
            const double pts[8][2] = {{hx, 0}, {hx, hy}, {0, hy}, {-hx, hy}, {-hx, 0}, {-hx, -hy}, {0, -hy}, {hx, -hy}};
            for (auto &p : pts)
            {
                CandidateLocation c;
                c.offset = Vec3(p[0], p[1], 0.0);
                c.orientation = {std::atan2(p[1], p[0]) * rad2deg, 0.0, 0.0};
                all.push_back(c);
            }
        }
        else
        {
            double hy = 0.005 * d.Y, hz = 0.005 * d.Z;
            for (int iz = 1; iz >= -1; --iz)
                for (int iy = -1; iy <= 1; ++iy)
                {
                    CandidateLocation c;
                    c.offset = Vec3(0.0, iy * hy, iz * hz);
                    if (iy == 0 && iz == 0)
                        c.orientation = {};
                    else
                    {
                        double y = iy * hy, z = iz * hz;
                        double bearing = (y == 0.0) ? 0.0 : std::atan2(y, 0.0) * rad2deg;
                        double tilt = -std::atan2(z, std::abs(y)) * rad2deg;
                        c.orientation = {bearing, tilt, 0.0};
                    }
                    all.push_back(c);
                }
        }
        if (d.selected.empty())
            return all;
        std::vector<CandidateLocation> out;
        for (std::size_t i : d.selected)
        {
            if (i >= all.size())
                throw std::invalid_argument("ue_candidate_locations: selected index out of range");
            out.push_back(all[i]);
        }
        return out;
    }
}

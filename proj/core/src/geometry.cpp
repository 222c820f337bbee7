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

#include "fr3/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fr3
{
    double wrap_azimuth(double deg)
    {
        double a = std::fmod(deg + 180.0, 360.0);
        if (a < 0.0)
            a += 360.0;
        a -= 180.0;
        // keep +180 instead of -180 for inputs that were exactly +180
        if (a == -180.0 && deg > 0.0)
            a = 180.0;
        return a;
    }

    double wrap_zenith(double deg)
    {
        double t = std::fmod(deg, 360.0);
        if (t < 0.0)
            t += 360.0;
        if (t > 180.0)
            t = 360.0 - t;
        return t;
    }

    Vec3 direction(double zenith_deg, double azimuth_deg)
    {
        double t = zenith_deg * deg2rad, p = azimuth_deg * deg2rad;
        return {std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t)};
    }

    void angles_of(const Vec3 &v, double &zenith_deg, double &azimuth_deg)
    {
        double rho = std::hypot(v.x(), v.y());
        zenith_deg = std::atan2(rho, v.z()) * rad2deg;
        azimuth_deg = std::atan2(v.y(), v.x()) * rad2deg;
    }

    Mat3 rotation(const Orientation &o)
    {
        double a = o.alpha * deg2rad, b = o.beta * deg2rad, g = o.gamma * deg2rad;
        Mat3 rz, ry, rx;
        rz << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
        ry << std::cos(b), 0, std::sin(b), 0, 1, 0, -std::sin(b), 0, std::cos(b);
        rx << 1, 0, 0, 0, std::cos(g), -std::sin(g), 0, std::sin(g), std::cos(g);
        return rz * ry * rx;
    }

    SiteLayout build_hex_layout(double isd, int n_rings, double h_bs, double sector_offset_deg, double downtilt_deg)
    {
        if (!(isd > 0.0))
            throw std::invalid_argument("build_hex_layout: isd must be positive");
        if (n_rings < 0)
            throw std::invalid_argument("build_hex_layout: n_rings must be non-negative");

        SiteLayout L;
        L.kind = LayoutKind::Hex;
        L.isd = isd;
        const double s3 = std::sqrt(3.0);

        // Axial coordinates, ordered by ring then angle so that the central site is index 0
        for (int ring = 0; ring <= n_rings; ++ring)
            for (int q = -ring; q <= ring; ++q)
                for (int r = -ring; r <= ring; ++r)
                {
                    int s = -q - r;
                    if (std::max({std::abs(q), std::abs(r), std::abs(s)}) != ring)
                        continue;
                    Site site;
                    site.position = Vec3(isd * (q + 0.5 * r), isd * (0.5 * s3 * r), h_bs);
                    for (int k = 0; k < 3; ++k)
                        site.sectors.push_back({wrap_azimuth(sector_offset_deg + 120.0 * k), downtilt_deg, 0.0});
                    L.sites.push_back(site);
                }

        // Translations of the (n_rings) hexagonal cluster: (2n+1, -n) in axial coordinates and its rotations
        if (n_rings > 0)
        {
            int q = 2 * n_rings + 1, r = -n_rings;
            for (int k = 0; k < 6; ++k)
            {
                L.wrap_vectors.emplace_back(isd * (q + 0.5 * r), isd * 0.5 * s3 * r, 0.0);
                int nq = -r, nr = q + r; // rotate by 60 degrees
                q = nq;
                r = nr;
            }
        }
        return L;
    }

    SiteLayout build_indoor_layout(double width, double depth, int n_bs, double h_bs)
    {
        if (!(width > 0.0) || !(depth > 0.0) || !(h_bs > 0.0))
            throw std::invalid_argument("build_indoor_layout: dimensions must be positive");
        if (n_bs < 1)
            throw std::invalid_argument("build_indoor_layout: n_bs must be at least 1");

        int rows = 1, cols = n_bs;
        double aspect = width / depth, best = std::numeric_limits<double>::infinity();
        for (int r = 1; r <= n_bs; ++r)
        {
            if (n_bs % r != 0)
                continue;
            int c = n_bs / r;
            double err = std::abs(std::log(double(c) / double(r) / aspect));
            if (err < best)
            {
                best = err;
                rows = r;
                cols = c;
            }
        }

        SiteLayout L;
        L.kind = LayoutKind::Indoor;
        L.width = width;
        L.depth = depth;

        // Prime counts above 3 would give a single long row; use two rows instead
        bool prime = n_bs > 3 && rows == 1;
        if (prime)
        {
            int top = (n_bs + 1) / 2;
            for (int row = 0; row < 2; ++row)
            {
                int c = row == 0 ? top : n_bs - top;
                for (int i = 0; i < c; ++i)
                {
                    Site s;
                    s.position = Vec3((i + 0.5) * width / c, (row + 0.5) * depth / 2.0, h_bs);
                    s.sectors.push_back({});
                    L.sites.push_back(s);
                }
            }
            return L;
        }

        for (int j = 0; j < rows; ++j)
            for (int i = 0; i < cols; ++i)
            {
                Site s;
                s.position = Vec3((i + 0.5) * width / cols, (j + 0.5) * depth / rows, h_bs);
                s.sectors.push_back({});
                L.sites.push_back(s);
            }
        return L;
    }

    SiteLayout build_single_site(double h_bs, double radius, double half_angle_deg, double bearing_deg, double downtilt_deg)
    {
        if (!(radius > 0.0) || !(h_bs > 0.0))
            throw std::invalid_argument("build_single_site: radius and height must be positive");
        if (!(half_angle_deg > 0.0) || half_angle_deg > 180.0)
            throw std::invalid_argument("build_single_site: half angle must be in (0, 180]");
        SiteLayout L;
        L.kind = LayoutKind::Single;
        L.radius = radius;
        L.half_angle = half_angle_deg;
        Site s;
        s.position = Vec3(0.0, 0.0, h_bs);
        s.sectors.push_back({wrap_azimuth(bearing_deg), downtilt_deg, 0.0});
        L.sites.push_back(s);
        return L;
    }

    Vec3 wrapped_position(const SiteLayout &layout, const Vec3 &p, const Vec3 &reference)
    {
        Vec3 best = p;
        double bd = (p - reference).head<2>().squaredNorm();
        for (const Vec3 &w : layout.wrap_vectors)
        {
            Vec3 q = p + w;
            double d = (q - reference).head<2>().squaredNorm();
            if (d < bd)
            {
                bd = d;
                best = q;
            }
        }
        return best;
    }

    double wrapped_distance_2d(const SiteLayout &layout, const Vec3 &p, std::size_t site)
    {
        if (site >= layout.sites.size())
            throw std::invalid_argument("wrapped_distance_2d: site index out of range");
        const Vec3 &ref = layout.sites[site].position;
        return (wrapped_position(layout, p, ref) - ref).head<2>().norm();
    }

    LinkGeometry link_geometry(const Vec3 &bs, const Orientation &, const Vec3 &ue)
    {
        Vec3 d = ue - bs;
        if (d.norm() == 0.0)
            throw std::invalid_argument("link_geometry: coincident BS and UE positions");
        LinkGeometry g;
        g.h_BS = bs.z();
        g.h_UE = ue.z();
        g.d2D = d.head<2>().norm();
        g.d3D = d.norm();
        angles_of(d, g.los_zod, g.los_aod);
        if (g.d2D == 0.0)
            g.los_aod = 0.0;
        g.los_aoa = wrap_azimuth(g.los_aod + 180.0);
        g.los_zoa = 180.0 - g.los_zod;
        return g;
    }

    LcsAngles gcs_to_lcs(const Orientation &o, double zenith_deg, double azimuth_deg)
    {
        Mat3 R = rotation(o);
        Vec3 r = direction(zenith_deg, azimuth_deg);
        Vec3 rl = R.transpose() * r;
        LcsAngles out;
        angles_of(rl, out.zenith, out.azimuth);

        // psi: angle between the GCS theta-hat and the rotated LCS theta-hat
        double t = zenith_deg * deg2rad, p = azimuth_deg * deg2rad;
        Vec3 th(std::cos(t) * std::cos(p), std::cos(t) * std::sin(p), -std::sin(t));
        Vec3 ph(-std::sin(p), std::cos(p), 0.0);
        double tl = out.zenith * deg2rad, pl = out.azimuth * deg2rad;
        Vec3 thl(std::cos(tl) * std::cos(pl), std::cos(tl) * std::sin(pl), -std::sin(tl));
        Vec3 thl_g = R * thl;
        out.psi = std::atan2(ph.dot(thl_g), th.dot(thl_g)) * rad2deg;
        return out;
    }

    LcsAngles lcs_to_gcs(const Orientation &o, double zenith_lcs_deg, double azimuth_lcs_deg)
    {
        Mat3 R = rotation(o);
        Vec3 rg = R * direction(zenith_lcs_deg, azimuth_lcs_deg);
        LcsAngles out;
        angles_of(rg, out.zenith, out.azimuth);
        out.psi = -gcs_to_lcs(o, out.zenith, out.azimuth).psi;
        return out;
    }
}

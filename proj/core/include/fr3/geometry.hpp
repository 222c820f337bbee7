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

#ifndef FR3_GEOMETRY_HPP
#define FR3_GEOMETRY_HPP

#include <Eigen/Dense>
#include <numbers>
#include <vector>

namespace fr3
{
    using Vec3 = Eigen::Vector3d;
    using Mat3 = Eigen::Matrix3d;

    inline constexpr double speed_of_light = 3.0e8; // m/s
    inline constexpr double deg2rad = std::numbers::pi / 180.0;
    inline constexpr double rad2deg = 180.0 / std::numbers::pi;

    // Bearing (alpha), downtilt (beta) and slant (gamma) in degrees
    struct Orientation
    {
        double alpha = 0.0;
        double beta = 0.0;
        double gamma = 0.0;
    };

    struct Site
    {
        Vec3 position = Vec3::Zero();
        std::vector<Orientation> sectors;
    };

    enum class LayoutKind
    {
        Hex,    // 19 sites, wrap-around
        Indoor, // BS grid inside a rectangle
        Single  // one site, UEs in a sector-shaped area in front of it
    };

    struct SiteLayout
    {
        LayoutKind kind = LayoutKind::Hex;
        std::vector<Site> sites;
        double isd = 0.0;
        std::vector<Vec3> wrap_vectors; // excludes the identity translation
        double width = 0.0, depth = 0.0; // indoor rectangle
        double radius = 0.0;             // single-site deployment radius
        double half_angle = 60.0;        // single-site sector half width in degrees
    };

    struct LinkGeometry
    {
        double d2D = 0.0, d3D = 0.0, d2D_in = 0.0;
        double los_aod = 0.0, los_zod = 0.0; // departure, GCS, degrees
        double los_aoa = 0.0, los_zoa = 0.0; // arrival, GCS, degrees
        double h_BS = 0.0, h_UE = 0.0;
    };

    struct LcsAngles
    {
        double zenith = 0.0;  // degrees
        double azimuth = 0.0; // degrees
        double psi = 0.0;     // polarization rotation angle, degrees
    };

    // Wrap an azimuth into [-180, 180]
    double wrap_azimuth(double deg);

    // Fold a zenith angle into [0, 180]
    double wrap_zenith(double deg);

    // Unit vector for (zenith, azimuth) in degrees
    Vec3 direction(double zenith_deg, double azimuth_deg);

    // (zenith, azimuth) in degrees of a non-zero vector
    void angles_of(const Vec3 &v, double &zenith_deg, double &azimuth_deg);

    // Rotation matrix R = Rz(alpha) Ry(beta) Rx(gamma) taking LCS coordinates to GCS
    Mat3 rotation(const Orientation &o);

    SiteLayout build_hex_layout(double isd, int n_rings = 2, double h_bs = 25.0, double sector_offset_deg = 30.0,
                                double downtilt_deg = 0.0);

    SiteLayout build_indoor_layout(double width, double depth, int n_bs, double h_bs);

    SiteLayout build_single_site(double h_bs, double radius, double half_angle_deg = 60.0, double bearing_deg = 0.0,
                                 double downtilt_deg = 0.0);

    // Image of p (over the wrap set plus identity) closest in 2D to the reference point
    Vec3 wrapped_position(const SiteLayout &layout, const Vec3 &p, const Vec3 &reference);

    // Effective 2D distance between p and site s using wrap-around
    double wrapped_distance_2d(const SiteLayout &layout, const Vec3 &p, std::size_t site);

    LinkGeometry link_geometry(const Vec3 &bs, const Orientation &bs_orientation, const Vec3 &ue);

    LcsAngles gcs_to_lcs(const Orientation &o, double zenith_deg, double azimuth_deg);

    // Inverse of gcs_to_lcs; the psi of the result is the rotation from LCS to GCS polarization bases
    LcsAngles lcs_to_gcs(const Orientation &o, double zenith_lcs_deg, double azimuth_lcs_deg);
}

#endif

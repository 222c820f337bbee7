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

#ifndef FR3_COEFFICIENTS_HPP
#define FR3_COEFFICIENTS_HPP

#include "fr3/antenna.hpp"
#include "fr3/largescale.hpp"
#include "fr3/smallscale.hpp"

#include <array>
#include <complex>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fr3
{
    using cdouble = std::complex<double>;
    using PhaseGrid = std::vector<std::vector<std::array<double, 4>>>; // [n][m] (tt, tp, pt, pp), radians

    struct ChannelRealization
    {
        int U = 0, S = 0, T = 0;
        double fc = 0.0;     // GHz
        double lambda = 0.0; // m
        std::vector<double> delays;             // s, non-decreasing
        std::vector<std::vector<cdouble>> taps; // each U*S*T, index (u*S + s)*T + t
        std::uint64_t link = 0;
        std::string flags;

        std::size_t n_taps() const { return delays.size(); }
        cdouble &at(std::size_t tap, int u, int s, int t) { return taps[tap][(std::size_t(u) * S + s) * T + t]; }
        cdouble at(std::size_t tap, int u, int s, int t) const { return taps[tap][(std::size_t(u) * S + s) * T + t]; }
    };

    struct RayCountConfig
    {
        double B = 100e6;              // Hz
        double D_h = 0.0, D_v = 0.0;   // m
        double c_DS = 0.0;             // s
        double c_ASD = 0.0, c_ZSD = 0.0; // degrees
        double k = 0.5;
        int M_min = 20, M_max = 40;
        double fc = 7.0; // GHz
        void validate() const;
    };

    struct RayCount
    {
        int M = 0, M_t = 0, M_AOD = 0, M_ZOD = 0;
    };

    PhaseGrid draw_phases(int N, int M, Rng &rng);

    RayCount ray_count(const RayCountConfig &cfg);

    struct SubClusterMap
    {
        std::array<std::vector<int>, 3> rays;
        std::array<double, 3> delay_factor{0.0, 1.28, 2.56}; // multiples of c_DS
    };

    // Sub-cluster grouping for M rays; M = 20 gives the tabulated (10, 6, 4) split
    SubClusterMap sub_cluster_map(int M = 20);

    // Per-ray delays including sub-cluster offsets for the two strongest clusters (c_DS in seconds)
    RayGrid ray_delays(const ClusterSet &cs, double c_DS, bool sub_clusters);

    // One end of the link. Element offsets d are GCS vectors relative to the reference point.
    struct ArrayEndpoint
    {
        Vec3 reference = Vec3::Zero();
        std::vector<Vec3> offsets;
        std::vector<ElementPattern> patterns; // distinct patterns (slant included)
        std::vector<Orientation> mounts;      // distinct mounting orientations
        std::vector<std::array<int, 2>> element_group; // per element: (pattern, mount)
        std::size_t size() const { return offsets.size(); }
    };

    // Endpoint for a panel array with the given orientation
    ArrayEndpoint make_panel_endpoint(const PanelArray &a, const Vec3 &reference, const Orientation &o,
                                      double wavelength);

    // Endpoint for the candidate locations of a UE device, dual-polarized when P = 2
    ArrayEndpoint make_device_endpoint(const UEDevice &d, const ElementPattern &pattern, int P, const Vec3 &reference,
                                       const Orientation &o);

    struct NearFieldGeometry;

    struct SynthesisOptions
    {
        double fc = 7.0; // GHz
        Vec3 velocity = Vec3::Zero();   // UE velocity, m/s
        std::vector<double> times{0.0}; // s
        bool sub_clusters = true;
        double c_DS = 0.0; // s
        LosAngles los;     // GCS angles of the direct path
        double d3D = 0.0;
        const NearFieldGeometry *near_field = nullptr; // spherical phases when set
        bool nf_angles = false;                        // element-wise angles (needs near_field)
        const std::vector<std::vector<double>> *alpha = nullptr; // [n][s] BS-side power attenuation
        const std::vector<double> *beta = nullptr;               // [u] UE-side power attenuation
        const std::vector<std::vector<std::vector<double>>> *ray_alpha = nullptr; // [n][m][s]
        const std::vector<double> *los_alpha = nullptr;                            // [s], direct path
    };

    ChannelRealization synthesize(const ClusterSet &cs, const ArrayEndpoint &tx, const ArrayEndpoint &rx,
                                  const PhaseGrid &phases, const SynthesisOptions &opt);

    struct AbsoluteDelay
    {
        double dtau = 0.0;  // s
        double shift = 0.0; // s, added to every tap
        bool clamped = false;
    };

    // lg(dtau) = mu + sigma * x for a standard normal x; LOS links are shifted by d3D/c only
    AbsoluteDelay absolute_delay(const AbsDelayParams &p, bool los, double d3D, std::optional<double> L_bound, double x);
    AbsoluteDelay absolute_delay(const AbsDelayParams &p, bool los, double d3D, std::optional<double> L_bound, Rng &rng);

    void shift_delays(ChannelRealization &H, double shift);

    void apply_large_scale(ChannelRealization &H, const LargeScaleResult &ls);

    // -10 log10 of the mean over (u, s) of the tap energy at time sample t
    double coupling_loss(const ChannelRealization &H, int t = 0);

    // Sum of the taps at time sample t as a U x S matrix
    Eigen::MatrixXcd narrowband(const ChannelRealization &H, int t = 0);

    void write_cir(std::ostream &out, const ChannelRealization &H);
    ChannelRealization read_cir(std::istream &in);
}

#endif

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

#ifndef FR3_SMALLSCALE_HPP
#define FR3_SMALLSCALE_HPP

#include "fr3/largescale.hpp"
#include "fr3/rng.hpp"
#include "fr3/scenario.hpp"

#include <array>
#include <vector>

namespace fr3
{
    using RayGrid = std::vector<std::vector<double>>; // [cluster][ray]

    struct ClusterSet
    {
        int N = 0, M = 0;
        bool los = false;
        double K_R = 0.0;   // linear Ricean factor, 0 for NLOS
        double C_tau = 1.0; // delay scaling applied under LOS
        std::vector<double> tau, tau_scaled; // s
        std::vector<double> P;               // scattered cluster powers
        double P_los = 0.0;
        std::vector<double> aoa, aod, zoa, zod; // cluster centers, degrees
        RayGrid ray_aoa, ray_aod, ray_zoa, ray_zod;
        RayGrid kappa;
        std::vector<std::vector<std::array<double, 4>>> eta; // (tt, tp, pt, pp)
        std::array<int, 2> strongest{-1, -1};                // indices into the (pruned) cluster arrays

        // Delay used when synthesizing a cluster: tau_scaled for LOS, tau otherwise
        double delay(int n) const { return los ? tau_scaled[n] : tau[n]; }
    };

    struct DelayResult
    {
        std::vector<double> tau, tau_scaled;
        double C_tau = 1.0;
    };

    struct PowerResult
    {
        std::vector<double> P;
        double P_los = 0.0;
    };

    struct LosAngles
    {
        double aoa = 0.0, aod = 0.0, zoa = 90.0, zod = 90.0;
    };

    struct AngleSpreads
    {
        double ASA = 0.0, ASD = 0.0, ZSA = 0.0, ZSD = 0.0;
        double c_asa = 0.0, c_asd = 0.0, c_zsa = 0.0, c_zsd = 0.0; // intra-cluster spreads, degrees
    };

    struct ClusterAngles
    {
        std::vector<double> aoa, aod, zoa, zod;
        RayGrid ray_aoa, ray_aod, ray_zoa, ray_zod;
    };

    // C_tau as a function of K in dB
    double delay_scaling(double K_dB);

    // Number of clusters: discrete uniform on [n_min, n_max] when enabled, else the tabulated value
    int draw_cluster_count(const ScenarioParams &sc, StateClass s, Rng &rng, bool variability);

    DelayResult generate_delays(int N, double DS, double r_tau, double K_dB, bool los, Rng &rng);

    PowerResult generate_powers(const std::vector<double> &tau, double DS, double r_tau, double zeta_dB, double K_dB,
                                bool los, Rng &rng);

    // Interpolated NLOS scaling factor for N clusters from a table keyed by N
    double scaling_factor(const std::map<int, double> &table, int N);

    // The twenty tabulated intra-cluster offsets for M = 20; a symmetric zero-sum set otherwise
    std::vector<double> ray_offsets(int M);

    // Three ray groups of the sub-cluster structure (0-based ray indices)
    std::array<std::vector<int>, 3> sub_cluster_groups(int M);

    // Cluster and ray angles. P are the scattered powers, P_los is added to cluster 0 for the LOS case.
    ClusterAngles generate_angles(const std::vector<double> &P, double P_los, const AngleSpreads &sp, int M,
                                  double K_dB, bool los, bool o2i, const LosAngles &los_angles, int N_table,
                                  const ScalingTables &tables, Rng &rng);

    // Random intra-cluster coupling; the two strongest clusters are coupled within their sub-cluster groups
    void couple_angles(ClusterAngles &a, const std::array<int, 2> &strongest, Rng &rng);

    RayGrid generate_xpr(double mu_dB, double sigma_dB, int N, int M, Rng &rng);

    std::vector<std::vector<std::array<double, 4>>> polarization_weights(const RayGrid &kappa, Rng &rng, bool enabled);

    // Indices of the two strongest clusters (by scattered power plus LOS on cluster 0)
    std::array<int, 2> strongest_clusters(const std::vector<double> &P, double P_los);

    struct SmallScaleInputs
    {
        int N = 0; // clusters before pruning
        int M = 20;
        LspSet lsp;
        bool los = false, o2i = false;
        LosAngles los_angles;
        double r_tau = 2.0, zeta = 3.0, xpr_mu = 8.0, xpr_sigma = 4.0;
        AngleSpreads spreads; // ASA..ZSD taken from lsp when left at zero
        bool pol_variability = false;
        double prune_db = 25.0; // <= 0 disables pruning
    };

    // Steps delays..polarization for one link, each step on its own substream (seed, drop, link, step)
    ClusterSet generate_cluster_set(const SmallScaleInputs &in, const ScalingTables &tables, std::uint64_t seed,
                                    std::uint64_t drop, std::uint64_t link);
}

#endif

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

#include "fr3/smallscale.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fr3
{
    namespace
    {
        const double offsets20[20] = {0.0447, -0.0447, 0.1413, -0.1413, 0.2492, -0.2492, 0.3715, -0.3715,
                                      0.5129, -0.5129, 0.6797, -0.6797, 0.8844, -0.8844, 1.1481, -1.1481,
                                      1.5195, -1.5195, 2.1551, -2.1551};

        double cubic(const std::array<double, 4> &c, double K)
        {
            return c[0] + c[1] * K + c[2] * K * K + c[3] * K * K * K;
        }

        double sign_draw(Rng &rng) { return rng.uniform() < 0.5 ? -1.0 : 1.0; }
    }

    double delay_scaling(double K_dB)
    {
        return 0.7705 - 0.0433 * K_dB + 0.0002 * K_dB * K_dB + 0.000017 * K_dB * K_dB * K_dB;
    }

    int draw_cluster_count(const ScenarioParams &sc, StateClass s, Rng &rng, bool variability)
    {
        if (!variability)
            return int(std::lround(sc.get("n_clusters", s)));
        if (!sc.has("n_min", s) || !sc.has("n_max", s))
            throw DataError("scenario " + sc.name + ": no cluster-count range for state " + state_name(s));
        int lo = int(std::lround(sc.get("n_min", s))), hi = int(std::lround(sc.get("n_max", s)));
        return rng.uniform_int(lo, hi);
    }

    DelayResult generate_delays(int N, double DS, double r_tau, double K_dB, bool los, Rng &rng)
    {
        if (N < 1)
            throw std::invalid_argument("generate_delays: N must be at least 1");
        if (!(DS > 0.0) || r_tau < 1.0)
            throw std::invalid_argument("generate_delays: DS must be positive and r_tau at least 1");
        DelayResult r;
        r.tau.resize(N);
        for (double &t : r.tau)
            t = -r_tau * DS * std::log(rng.uniform());
        double mn = *std::min_element(r.tau.begin(), r.tau.end());
        for (double &t : r.tau)
            t -= mn;
        std::sort(r.tau.begin(), r.tau.end());
        r.C_tau = los ? delay_scaling(K_dB) : 1.0;
        r.tau_scaled.resize(N);
        for (int n = 0; n < N; ++n)
            r.tau_scaled[n] = r.tau[n] / r.C_tau;
        return r;
    }

    PowerResult generate_powers(const std::vector<double> &tau, double DS, double r_tau, double zeta_dB, double K_dB,
                                bool los, Rng &rng)
    {
        if (tau.empty())
            throw std::invalid_argument("generate_powers: no delays");
        if (!(DS > 0.0) || r_tau < 1.0 || zeta_dB < 0.0)
            throw std::invalid_argument("generate_powers: invalid DS, r_tau or zeta");
        PowerResult r;
        r.P.resize(tau.size());
        double sum = 0.0;
        for (std::size_t n = 0; n < tau.size(); ++n)
        {
            double Z = rng.normal(0.0, zeta_dB);
            r.P[n] = std::exp(-tau[n] * (r_tau - 1.0) / (r_tau * DS)) * std::pow(10.0, -Z / 10.0);
            sum += r.P[n];
        }
        double KR = los ? std::pow(10.0, K_dB / 10.0) : 0.0;
        for (double &p : r.P)
            p = p / sum / (1.0 + KR);
        r.P_los = KR / (1.0 + KR);
        return r;
    }

    double scaling_factor(const std::map<int, double> &table, int N)
    {
        if (table.empty())
            throw DataError("scaling factor table is empty");
        auto it = table.find(N);
        if (it != table.end())
            return it->second;
        if (N < table.begin()->first || N > table.rbegin()->first)
            throw DataError("no scaling factor for N = " + std::to_string(N));
        auto hi = table.upper_bound(N);
        auto lo = std::prev(hi);
        double w = double(N - lo->first) / double(hi->first - lo->first);
        return (1.0 - w) * lo->second + w * hi->second;
    }

    std::vector<double> ray_offsets(int M)
    {
        if (M < 1)
            throw std::invalid_argument("ray_offsets: M must be at least 1");
        if (M == 20)
            return std::vector<double>(offsets20, offsets20 + 20);
        // Midpoint quantiles of U(-2, 2), listed by increasing magnitude with alternating sign
        std::vector<double> q(M);
        for (int m = 0; m < M; ++m)
            q[m] = -2.0 + 4.0 * (m + 0.5) / M;
        std::stable_sort(q.begin(), q.end(), [](double a, double b)
                         { return std::abs(a) < std::abs(b) || (std::abs(a) == std::abs(b) && a > b); });
        for (double &x : q)
            if (std::abs(x) < 1e-15)
                x = 0.0;
        return q;
    }

    std::array<std::vector<int>, 3> sub_cluster_groups(int M)
    {
        std::array<std::vector<int>, 3> g;
        if (M == 20)
        {
            g[0] = {0, 1, 2, 3, 4, 5, 6, 7, 18, 19};
            g[1] = {8, 9, 10, 11, 16, 17};
            g[2] = {12, 13, 14, 15};
            return g;
        }
        int n1 = std::max(1, int(std::lround(0.5 * M)));
        int n2 = std::min(M - n1, int(std::lround(0.3 * M)));
        for (int m = 0; m < M; ++m)
            g[m < n1 ? 0 : (m < n1 + n2 ? 1 : 2)].push_back(m);
        return g;
    }

    std::array<int, 2> strongest_clusters(const std::vector<double> &P, double P_los)
    {
        std::vector<int> idx(P.size());
        std::iota(idx.begin(), idx.end(), 0);
        auto pw = [&](int n)
        { return P[n] + (n == 0 ? P_los : 0.0); };
        std::stable_sort(idx.begin(), idx.end(), [&](int a, int b)
                         { return pw(a) > pw(b); });
        std::array<int, 2> s{-1, -1};
        for (std::size_t i = 0; i < idx.size() && i < 2; ++i)
            s[i] = idx[i];
        return s;
    }

    ClusterAngles generate_angles(const std::vector<double> &P, double P_los, const AngleSpreads &sp, int M,
                                  double K_dB, bool los, bool o2i, const LosAngles &la, int N_table,
                                  const ScalingTables &tables, Rng &rng)
    {
        const int N = int(P.size());
        if (N < 1)
            throw std::invalid_argument("generate_angles: no clusters");
        double c_phi = scaling_factor(tables.c_phi_nlos, N_table);
        double c_theta = scaling_factor(tables.c_theta_nlos, N_table);
        if (los)
        {
            c_phi *= cubic(tables.c_phi_los_poly, K_dB);
            c_theta *= cubic(tables.c_theta_los_poly, K_dB);
        }

        std::vector<double> pa(P);
        pa[0] += P_los;
        double pmax = *std::max_element(pa.begin(), pa.end());

        const std::vector<double> alpha = ray_offsets(M);
        ClusterAngles out;

        auto azimuths = [&](double AS, double los_angle, double c_ray, std::vector<double> &cl, RayGrid &rays)
        {
            std::vector<double> raw(N);
            for (int n = 0; n < N; ++n)
            {
                double base = 2.0 * (AS / 1.4) * std::sqrt(-std::log(pa[n] / pmax)) / c_phi;
                double X = sign_draw(rng), Y = rng.normal(0.0, AS / 7.0);
                raw[n] = X * base + Y;
            }
            cl.resize(N);
            for (int n = 0; n < N; ++n)
                cl[n] = los ? raw[n] - raw[0] + los_angle : raw[n] + los_angle;
            rays.assign(N, std::vector<double>(M));
            for (int n = 0; n < N; ++n)
            {
                for (int m = 0; m < M; ++m)
                    rays[n][m] = wrap_azimuth(cl[n] + c_ray * alpha[m]);
                cl[n] = wrap_azimuth(cl[n]);
            }
        };

        auto zeniths = [&](double ZS, double mean_angle, double c_ray, std::vector<double> &cl, RayGrid &rays)
        {
            std::vector<double> raw(N);
            for (int n = 0; n < N; ++n)
            {
                double base = -ZS * std::log(pa[n] / pmax) / c_theta;
                double X = sign_draw(rng), Y = rng.normal(0.0, ZS / 7.0);
                raw[n] = X * base + Y;
            }
            cl.resize(N);
            for (int n = 0; n < N; ++n)
                cl[n] = los ? raw[n] - raw[0] + mean_angle : raw[n] + mean_angle;
            rays.assign(N, std::vector<double>(M));
            for (int n = 0; n < N; ++n)
            {
                for (int m = 0; m < M; ++m)
                    rays[n][m] = wrap_zenith(cl[n] + c_ray * alpha[m]);
                cl[n] = wrap_zenith(cl[n]);
            }
        };

        azimuths(sp.ASA, la.aoa, sp.c_asa, out.aoa, out.ray_aoa);
        azimuths(sp.ASD, la.aod, sp.c_asd, out.aod, out.ray_aod);
        // Indoor UEs see arrivals centered on the horizon; the LOS re-centering still applies under LOS
        double zoa_mean = (o2i && !los) ? 90.0 : la.zoa;
        zeniths(sp.ZSA, zoa_mean, sp.c_zsa, out.zoa, out.ray_zoa);
        zeniths(sp.ZSD, la.zod, sp.c_zsd, out.zod, out.ray_zod);
        return out;
    }

    void couple_angles(ClusterAngles &a, const std::array<int, 2> &strongest, Rng &rng)
    {
        const int N = int(a.ray_aoa.size());
        for (int n = 0; n < N; ++n)
        {
            const int M = int(a.ray_aoa[n].size());
            std::vector<std::vector<int>> groups;
            if (n == strongest[0] || n == strongest[1])
            {
                for (auto &g : sub_cluster_groups(M))
                    if (!g.empty())
                        groups.push_back(g);
            }
            else
            {
                std::vector<int> all(M);
                std::iota(all.begin(), all.end(), 0);
                groups.push_back(all);
            }
            for (RayGrid *grid : {&a.ray_aod, &a.ray_zoa, &a.ray_zod})
            {
                std::vector<double> &v = (*grid)[n];
                for (const auto &g : groups)
                {
                    std::vector<int> perm = g;
                    rng.shuffle(perm);
                    std::vector<double> src(g.size());
                    for (std::size_t i = 0; i < g.size(); ++i)
                        src[i] = v[perm[i]];
                    for (std::size_t i = 0; i < g.size(); ++i)
                        v[g[i]] = src[i];
                }
            }
        }
    }

    RayGrid generate_xpr(double mu_dB, double sigma_dB, int N, int M, Rng &rng)
    {
        if (sigma_dB < 0.0)
            throw std::invalid_argument("generate_xpr: negative sigma");
        RayGrid k(N, std::vector<double>(M));
        for (auto &row : k)
            for (double &x : row)
                x = std::pow(10.0, rng.normal(mu_dB, sigma_dB) / 10.0);
        return k;
    }

    std::vector<std::vector<std::array<double, 4>>> polarization_weights(const RayGrid &kappa, Rng &rng, bool enabled)
    {
        std::vector<std::vector<std::array<double, 4>>> eta(kappa.size());
        for (std::size_t n = 0; n < kappa.size(); ++n)
        {
            eta[n].resize(kappa[n].size());
            for (std::size_t m = 0; m < kappa[n].size(); ++m)
            {
                if (!(kappa[n][m] > 0.0))
                    throw std::invalid_argument("polarization_weights: XPR must be positive");
                if (!enabled)
                {
                    eta[n][m] = {1.0, 1.0, 1.0, 1.0};
                    continue;
                }
                std::array<double, 4> e;
                for (double &x : e)
                    x = std::pow(10.0, rng.normal(0.0, 3.0) / 10.0);
                double ki = 1.0 / kappa[n][m];
                double scale = (2.0 + 2.0 * ki) / (e[0] + e[3] + (e[1] + e[2]) * ki);
                for (double &x : e)
                    x *= scale;
                eta[n][m] = e;
            }
        }
        return eta;
    }

    ClusterSet generate_cluster_set(const SmallScaleInputs &in, const ScalingTables &tables, std::uint64_t seed,
                                    std::uint64_t drop, std::uint64_t link)
    {
        if (in.N < 1 || in.M < 1)
            throw std::invalid_argument("generate_cluster_set: N and M must be at least 1");

        Rng r_delay(seed, drop, link, Step::Delay), r_power(seed, drop, link, Step::Power);
        Rng r_angle(seed, drop, link, Step::Angle), r_couple(seed, drop, link, Step::Coupling);
        Rng r_xpr(seed, drop, link, Step::Xpr), r_pol(seed, drop, link, Step::Polarization);

        const double K = in.los ? in.lsp.K : 0.0;
        DelayResult d = generate_delays(in.N, in.lsp.DS, in.r_tau, K, in.los, r_delay);
        PowerResult p = generate_powers(d.tau, in.lsp.DS, in.r_tau, in.zeta, K, in.los, r_power);

        // Prune weak clusters; LOS power is carried by cluster 0
        std::vector<int> keep;
        {
            double pmax = 0.0;
            for (int n = 0; n < in.N; ++n)
                pmax = std::max(pmax, p.P[n] + (n == 0 ? p.P_los : 0.0));
            double thr = in.prune_db > 0.0 ? pmax * std::pow(10.0, -in.prune_db / 10.0) : 0.0;
            for (int n = 0; n < in.N; ++n)
                if (p.P[n] + (n == 0 ? p.P_los : 0.0) >= thr || (in.los && n == 0))
                    keep.push_back(n);
        }

        ClusterSet cs;
        cs.los = in.los;
        cs.K_R = in.los ? std::pow(10.0, K / 10.0) : 0.0;
        cs.C_tau = d.C_tau;
        cs.M = in.M;
        cs.N = int(keep.size());
        cs.P_los = p.P_los;
        double psum = 0.0;
        for (int n : keep)
        {
            cs.tau.push_back(d.tau[n]);
            cs.P.push_back(p.P[n]);
            psum += p.P[n];
        }
        double t0 = *std::min_element(cs.tau.begin(), cs.tau.end());
        for (double &t : cs.tau)
            t -= t0;
        for (double &x : cs.P)
            x *= (1.0 - cs.P_los) / psum;
        cs.tau_scaled.resize(cs.N);
        for (int n = 0; n < cs.N; ++n)
            cs.tau_scaled[n] = cs.tau[n] / cs.C_tau;

        cs.strongest = strongest_clusters(cs.P, cs.P_los);

        AngleSpreads sp = in.spreads;
        if (sp.ASA == 0.0 && sp.ASD == 0.0 && sp.ZSA == 0.0 && sp.ZSD == 0.0)
        {
            sp.ASA = in.lsp.ASA;
            sp.ASD = in.lsp.ASD;
            sp.ZSA = in.lsp.ZSA;
            sp.ZSD = in.lsp.ZSD;
        }
        ClusterAngles ang = generate_angles(cs.P, cs.P_los, sp, in.M, K, in.los, in.o2i, in.los_angles, in.N, tables,
                                            r_angle);
        couple_angles(ang, cs.strongest, r_couple);
        cs.aoa = std::move(ang.aoa);
        cs.aod = std::move(ang.aod);
        cs.zoa = std::move(ang.zoa);
        cs.zod = std::move(ang.zod);
        cs.ray_aoa = std::move(ang.ray_aoa);
        cs.ray_aod = std::move(ang.ray_aod);
        cs.ray_zoa = std::move(ang.ray_zoa);
        cs.ray_zod = std::move(ang.ray_zod);

        cs.kappa = generate_xpr(in.xpr_mu, in.xpr_sigma, cs.N, cs.M, r_xpr);
        cs.eta = polarization_weights(cs.kappa, r_pol, in.pol_variability);
        return cs;
    }
}

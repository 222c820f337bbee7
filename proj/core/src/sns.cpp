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

#include "fr3/sns.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace fr3
{
    void SnsConfig::validate() const
    {
        if (!(sigma > 0.0) || sigma_xi < 0.0 || !(R > 0.0))
            throw std::invalid_argument("SNS config: sigma and R must be positive, sigma_xi non-negative");
        if (!(C > 0.0))
            throw std::invalid_argument("SNS config: C must be positive");
        if (A < 0.0 || B < 0.0 || B > 1.0)
            throw std::invalid_argument("SNS config: A must be non-negative and B within [0, 1]");
        if (!(L_max > 0.0))
            throw std::invalid_argument("SNS config: L_max must be positive");
    }

    SnsConfig SnsConfig::from_scenario(const ScenarioParams &sc)
    {
        SnsConfig c;
        c.mu = sc.get_or("sns_mu", c.mu);
        c.sigma = sc.get_or("sns_sigma", c.sigma);
        c.A = sc.get_or("sns_A", c.A);
        c.R = sc.get_or("sns_R", c.R);
        c.B = sc.get_or("sns_B", c.B);
        c.sigma_xi = sc.get_or("sns_sigma_xi", c.sigma_xi);
        c.C = sc.get_or("sns_C", c.C);
        c.L_max = sc.get_or("sns_L_max", c.L_max);
        c.validate();
        return c;
    }

    double truncated_normal(double mu, double sigma, double lo, double hi, double u)
    {
        if (!(sigma > 0.0) || !(lo < hi))
            throw std::invalid_argument("truncated_normal: need sigma > 0 and lo < hi");
        boost::math::normal_distribution<double> nd(mu, sigma);
        double Fa = boost::math::cdf(nd, lo), Fb = boost::math::cdf(nd, hi);
        if (Fb - Fa < 1e-300)
            return mu < lo ? lo : hi;
        double p = Fa + u * (Fb - Fa);
        p = std::clamp(p, std::numeric_limits<double>::min(), 1.0 - 1e-16);
        return std::clamp(boost::math::quantile(nd, p), lo, hi);
    }

    std::vector<bool> draw_sns_status(int N, const SnsConfig &cfg, Rng &rng, double *pr_sns)
    {
        double pr = truncated_normal(cfg.mu, cfg.sigma, 0.0, 1.0, rng.uniform());
        if (pr_sns)
            *pr_sns = pr;
        std::vector<bool> st(std::max(N, 0));
        for (int n = 0; n < N; ++n)
            st[n] = rng.uniform() < pr;
        return st;
    }

    bool VisibilityRegion::contains(double x, double y) const
    {
        return std::abs(x - cx) <= 0.5 * a && std::abs(y - cy) <= 0.5 * b;
    }

    double VisibilityRegion::distance(double x, double y) const
    {
        double dx = std::max(0.0, std::abs(x - cx) - 0.5 * a);
        double dy = std::max(0.0, std::abs(y - cy) - 0.5 * b);
        return std::hypot(dx, dy);
    }

    double visibility_probability(double P_dB, double maxP_dB, const SnsConfig &cfg, double xi)
    {
        double v = cfg.A * std::exp(-(maxP_dB - P_dB) / cfg.R) + cfg.B + xi;
        return std::clamp(v, std::max(cfg.B, 0.05), 1.0);
    }

    VisibilityRegion visibility_region(double P_dB, double maxP_dB, const SnsConfig &cfg, double W, double H, Rng &rng)
    {
        if (!(W > 0.0) || !(H > 0.0))
            throw std::invalid_argument("visibility_region: array extent must be positive");
        VisibilityRegion vr;
        double xi = cfg.sigma_xi > 0.0 ? rng.normal(0.0, cfg.sigma_xi) : 0.0;
        vr.V = visibility_probability(P_dB, maxP_dB, cfg, xi);
        vr.a = vr.V < 1.0 ? rng.uniform(vr.V * W, W) : W;
        vr.b = vr.V * H * W / vr.a;
        double fx = rng.uniform(), fy = rng.uniform();
        vr.cx = -0.5 * W + 0.5 * vr.a + fx * (W - vr.a);
        vr.cy = -0.5 * H + 0.5 * vr.b + fy * (H - vr.b);
        return vr;
    }

    double element_alpha(const VisibilityRegion &vr, double x, double y, double C)
    {
        double D = std::hypot(vr.a, vr.b);
        if (!(D > 0.0))
            throw std::invalid_argument("element_alpha: degenerate visibility region");
        double d = vr.distance(x, y);
        return d == 0.0 ? 1.0 : std::exp(-C * d / D);
    }

    std::vector<double> element_attenuation(const VisibilityRegion &vr, const SnsConfig &cfg,
                                            const std::vector<std::array<double, 2>> &positions)
    {
        std::vector<double> a(positions.size());
        for (std::size_t s = 0; s < positions.size(); ++s)
            a[s] = element_alpha(vr, positions[s][0], positions[s][1], cfg.C);
        return a;
    }

    std::vector<std::array<double, 2>> array_plane_positions(const PanelArray &a, double wavelength)
    {
        std::vector<std::array<double, 2>> out;
        for (const Vec3 &p : element_positions(a, wavelength))
            out.push_back({p.y(), p.z()});
        return out;
    }

    std::vector<std::vector<double>> stochastic_sns(const std::vector<double> &P, const SnsConfig &cfg,
                                                    const std::vector<std::array<double, 2>> &positions, double W,
                                                    double H, Rng &rng, std::vector<bool> *status)
    {
        cfg.validate();
        const int N = int(P.size());
        std::vector<bool> st = draw_sns_status(N, cfg, rng);
        double pmax = *std::max_element(P.begin(), P.end());
        std::vector<std::vector<double>> alpha(N);
        for (int n = 0; n < N; ++n)
        {
            if (!st[n])
            {
                alpha[n].assign(positions.size(), 1.0);
                continue;
            }
            VisibilityRegion vr = visibility_region(10.0 * std::log10(P[n]), 10.0 * std::log10(pmax), cfg, W, H, rng);
            alpha[n] = element_attenuation(vr, cfg, positions);
        }
        if (status)
            *status = st;
        return alpha;
    }

    double fresnel_term(double D1, double D2, double r, double lambda, bool shadow_side)
    {
        double ex = std::max(0.0, D1 + D2 - r);
        double arg = 0.5 * std::numbers::pi * std::sqrt(std::numbers::pi / lambda * ex);
        return std::atan(shadow_side ? arg : -arg) / std::numbers::pi;
    }

    double knife_edge_loss(double product, double L_max, bool *clamped)
    {
        double arg = 1.0 - product;
        if (clamped)
            *clamped = false;
        if (arg <= 0.0)
        {
            if (clamped)
                *clamped = true;
            return L_max;
        }
        double L = -20.0 * std::log10(arg);
        if (L > L_max)
        {
            if (clamped)
                *clamped = true;
            return L_max;
        }
        return L;
    }

    double blocker_attenuation(const Blocker &bl, const Vec3 &a, const Vec3 &b, double lambda, double L_max,
                               bool *clamped)
    {
        if (clamped)
            *clamped = false;
        const double az = bl.normal_azimuth * deg2rad;
        const Vec3 nrm(std::cos(az), std::sin(az), 0.0), tan(-std::sin(az), std::cos(az), 0.0), up(0.0, 0.0, 1.0);
        const Vec3 ab = b - a;
        const double denom = nrm.dot(ab);
        if (std::abs(denom) < 1e-12)
            return 0.0;
        const double t = nrm.dot(bl.center - a) / denom;
        if (t <= 0.0 || t >= 1.0)
            return 0.0;
        const Vec3 q = a + t * ab;
        const double x = tan.dot(q - bl.center), z = up.dot(q - bl.center);
        const double r = ab.norm();

        auto term = [&](const Vec3 &edge, bool shadow)
        { return fresnel_term((edge - a).norm(), (b - edge).norm(), r, lambda, shadow); };

        const double hw = 0.5 * bl.width, hh = 0.5 * bl.height;
        double Fw1 = term(bl.center - hw * tan + z * up, x > -hw);
        double Fw2 = term(bl.center + hw * tan + z * up, x < hw);
        double Fh1 = term(bl.center + x * tan - hh * up, z > -hh);
        double Fh2 = term(bl.center + x * tan + hh * up, z < hh);
        return knife_edge_loss((Fh1 + Fh2) * (Fw1 + Fw2), L_max, clamped);
    }

    std::string draw_usage(const Registry &R, Rng &rng)
    {
        if (R.ue_usage.empty())
            throw DataError("no UE usage probabilities loaded");
        std::vector<double> w;
        for (auto &u : R.ue_usage)
            w.push_back(u.second);
        return R.ue_usage[rng.categorical(w)].first;
    }

    std::vector<double> ue_sns_mask(const std::string &usage, double fc_ghz, const Registry &R,
                                    const std::vector<std::size_t> &element_candidate, bool *fallback)
    {
        if (fallback)
            *fallback = false;
        std::vector<double> beta(element_candidate.size(), 1.0);
        if (usage == "free")
            return beta;
        const UeMaskRow *best = nullptr;
        double best_gap = std::numeric_limits<double>::infinity();
        for (const UeMaskRow &row : R.ue_masks)
        {
            if (row.usage != usage)
                continue;
            double gap = fc_ghz < row.f_lo ? row.f_lo - fc_ghz : (fc_ghz > row.f_hi ? fc_ghz - row.f_hi : 0.0);
            if (gap < best_gap)
            {
                best_gap = gap;
                best = &row;
            }
        }
        if (!best)
            throw DataError("no UE mask table for usage " + usage);
        if (best_gap > 0.0 && fallback)
            *fallback = true;
        for (std::size_t u = 0; u < element_candidate.size(); ++u)
        {
            std::size_t k = element_candidate[u];
            if (k >= best->atten_db.size())
                throw DataError("UE mask for " + usage + " has no entry for candidate " + std::to_string(k));
            beta[u] = std::pow(10.0, -best->atten_db[k] / 10.0);
        }
        return beta;
    }
}

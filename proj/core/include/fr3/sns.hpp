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

#ifndef FR3_SNS_HPP
#define FR3_SNS_HPP

#include "fr3/antenna.hpp"
#include "fr3/rng.hpp"
#include "fr3/scenario.hpp"

#include <string>
#include <vector>

namespace fr3
{
    struct SnsConfig
    {
        double mu = 0.5, sigma = 0.2;  // Pr_sns ~ N(mu, sigma^2) truncated to [0, 1]
        double A = 0.7, R = 10.0, B = 0.3, sigma_xi = 0.05; // visibility probability
        double C = 4.0;                // roll-off outside the visibility region
        double L_max = 40.0;           // knife-edge clamp, dB

        void validate() const;
        // Reads sns_mu, sns_sigma, sns_A, sns_R, sns_B, sns_sigma_xi, sns_C, sns_L_max; missing keys keep defaults
        static SnsConfig from_scenario(const ScenarioParams &sc);
    };

    // Inverse-CDF sample of N(mu, sigma^2) truncated to [lo, hi] for a uniform u in (0, 1)
    double truncated_normal(double mu, double sigma, double lo, double hi, double u);

    // Draws Pr_sns once, then one uniform per cluster; cluster n is non-stationary iff x_n < Pr_sns
    std::vector<bool> draw_sns_status(int N, const SnsConfig &cfg, Rng &rng, double *pr_sns = nullptr);

    // Rectangle on the array plane, coordinates centered on the array
    struct VisibilityRegion
    {
        double cx = 0.0, cy = 0.0; // m
        double a = 0.0, b = 0.0;   // width, height, m
        double V = 1.0;
        bool contains(double x, double y) const;
        // Euclidean distance from (x, y) to the rectangle, 0 inside
        double distance(double x, double y) const;
    };

    // V = A exp(-(maxP - P)/R) + B + xi clamped to [max(B, 0.05), 1]
    double visibility_probability(double P_dB, double maxP_dB, const SnsConfig &cfg, double xi);

    // Draw order: xi, width, center x, center y
    VisibilityRegion visibility_region(double P_dB, double maxP_dB, const SnsConfig &cfg, double W, double H, Rng &rng);

    // Power attenuation of an element at array-plane position (x, y): 1 inside, exp(-C d / D) outside
    double element_alpha(const VisibilityRegion &vr, double x, double y, double C);

    std::vector<double> element_attenuation(const VisibilityRegion &vr, const SnsConfig &cfg,
                                            const std::vector<std::array<double, 2>> &positions);

    // Horizontal and vertical array-plane coordinates of every panel element (LCS y and z)
    std::vector<std::array<double, 2>> array_plane_positions(const PanelArray &a, double wavelength);

    // Stochastic BS-side model for one link: alpha[n][s] from per-cluster powers (linear)
    std::vector<std::vector<double>> stochastic_sns(const std::vector<double> &P, const SnsConfig &cfg,
                                                    const std::vector<std::array<double, 2>> &positions, double W,
                                                    double H, Rng &rng, std::vector<bool> *status = nullptr);

    // Vertical rectangular screen
    struct Blocker
    {
        Vec3 center = Vec3::Zero();
        double width = 0.0, height = 0.0; // m
        double normal_azimuth = 0.0;      // degrees, horizontal normal of the screen
    };

    // Edge term atan(+-pi/2 sqrt(pi/lambda (D1 + D2 - r)))/pi, positive sign on the shadow side
    double fresnel_term(double D1, double D2, double r, double lambda, bool shadow_side);

    // -20 log10(1 - product), clamped at L_max when the argument of the logarithm is not positive
    double knife_edge_loss(double product, double L_max, bool *clamped = nullptr);

    // Loss in dB of the segment a -> b caused by the blocker; 0 when the segment does not cross the screen plane
    double blocker_attenuation(const Blocker &bl, const Vec3 &a, const Vec3 &b, double lambda, double L_max,
                               bool *clamped = nullptr);

    // Usage names in registry order, e.g. one-hand, two-hand, head-hand, free
    std::string draw_usage(const Registry &R, Rng &rng);

    /*!
    Per-element linear power attenuation for a usage scenario. element_candidate maps every UE element to a
    handheld candidate location. free gives all ones. Outside every tabulated range the nearest range is used
    and fallback is set.
    */
    std::vector<double> ue_sns_mask(const std::string &usage, double fc_ghz, const Registry &R,
                                    const std::vector<std::size_t> &element_candidate, bool *fallback = nullptr);
}

#endif

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

#ifndef FR3_HARNESS_HPP
#define FR3_HARNESS_HPP

#include "fr3/coefficients.hpp"
#include "fr3/config.hpp"
#include "fr3/scenario.hpp"

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <vector>

namespace fr3
{
    struct LinkReport
    {
        std::uint64_t link = 0;
        int site = 0, sector = 0;
        double x = 0.0, y = 0.0, h_ue = 0.0;
        double d2D = 0.0, d3D = 0.0;
        std::string state, location, o2i_model;
        double pl = 0.0, o2i_loss = 0.0, sf = 0.0, total_loss = 0.0;
        double coupling_loss = 0.0;
        double capacity = 0.0;
        double capacity_ff = 0.0; // NaN unless a far-field reference was synthesized
        double ds = 0.0, asa = 0.0, asd = 0.0, zsa = 0.0, zsd = 0.0; // s, degrees
        double K = 0.0;                                               // dB, NaN for non-LOS
        int n_clusters = 0, m_rays = 0, n_taps = 0;
        double gini = 0.0;
        double dtau = 0.0; // s
        std::string usage = "none";
        bool pl_out_of_range = false;
    };

    struct RunResult
    {
        std::vector<LinkReport> links;
        std::vector<std::string> data_files;
    };

    struct RaySpreads
    {
        double DS = 0.0, ASA = 0.0, ASD = 0.0, ZSA = 0.0, ZSD = 0.0;
    };

    // Power-weighted spreads of the generated rays (LOS ray included); azimuth spreads use the circular definition
    RaySpreads ray_spreads(const ClusterSet &cs, const LosAngles &los);

    // log2 det(I + snr/S H H^H) for a U x S matrix at one time sample
    double capacity(const Eigen::MatrixXcd &H, double snr_db);

    // Gini coefficient of non-negative values
    double gini(std::vector<double> values);

    // Ray powers of a cluster set over N * max(M, 20) slots (missing rays count as zero)
    std::vector<double> ray_power_slots(const ClusterSet &cs);

    // Sorted (value, empirical CDF) rows; duplicates keep the largest CDF
    std::vector<std::pair<double, double>> cdf_rows(std::vector<double> values);
    void emit_cdf(const std::vector<double> &values, const std::string &path);

    // Every link of a configuration; pure, no files written
    RunResult run_links(const RunConfig &cfg, const Registry &R);

    std::string links_csv(const RunResult &r);

    // Loads the registry, simulates, writes links.csv, cdf_*.csv and manifest.txt into cfg.out_dir
    RunResult run(const RunConfig &cfg);

    std::string sha256_file(const std::string &path);
}

#endif

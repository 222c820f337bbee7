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

#ifndef FR3_CONFIG_HPP
#define FR3_CONFIG_HPP

#include "fr3/antenna.hpp"
#include "fr3/sns.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fr3
{
    class ConfigError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    enum class SnsMode
    {
        Off,
        Stochastic,
        Blocker
    };
    const char *sns_mode_name(SnsMode m);
    SnsMode parse_sns_mode(const std::string &s);

    struct RunConfig
    {
        // [run]
        std::string scenario = "SMa";
        double fc = 7.0;          // GHz
        double bandwidth = 100e6; // Hz
        std::uint64_t seed = 1;
        std::uint64_t drop = 0;
        std::size_t n_ues = 100;
        int workers = 1;
        double snr_db = 10.0;
        int time_samples = 1;
        double sample_interval = 1e-3; // s
        double speed = 0.0;            // m/s, UE moves along +x of its heading
        double heading = 0.0;          // degrees
        std::string out_dir = "fr3sim-out";
        std::string data_dir; // empty selects the default
        bool write_cir = false;
        bool strict = false; // path-loss validity ranges are errors

        // [layout]
        std::string layout = "auto"; // auto | hex | indoor | single
        double radius = 0.0;
        double half_angle = 60.0;
        std::optional<double> isd, h_bs, h_ue, min_d2d, downtilt;
        std::optional<bool> force_los, force_indoor;

        // [features]
        bool near_field = false;
        bool nf_angles = false;
        bool nf_reference = false; // also synthesize the far-field channel for capacity comparison
        std::optional<int> n_spec;
        SnsMode sns = SnsMode::Off;
        bool ue_sns = false;
        bool cluster_variability = false;
        bool pol_variability = false;
        bool absolute_delay = false;
        bool ray_count_scaling = false;
        bool sub_clusters = true;

        // [raycount]
        double rc_D_h = 0.0, rc_D_v = 0.0; // m, 0 takes the BS array extent
        double rc_B = 0.0;                 // Hz, 0 takes the bandwidth
        double rc_k = 0.5;
        int rc_M_min = 20, rc_M_max = 40;

        // [bs_array], [ue_array]
        PanelArray bs_array;
        double bs_bearing = 0.0; // single-site layouts only
        UEDevice ue_device = UEDevice::handheld();
        int ue_P = 2;
        ElementPattern ue_pattern = ElementPattern::isotropic();

        // [blockers]
        std::vector<Blocker> blockers;

        void validate() const;
    };

    // Reads a sectioned key = value file; unknown keys are errors
    RunConfig load_config(const std::string &path);
    RunConfig parse_config(const std::string &text);

    // Applies one "section.key" = value assignment
    void set_config_value(RunConfig &cfg, const std::string &key, const std::string &value);

    // Every setting as sorted "section.key" = value pairs
    std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig &cfg);
}

#endif

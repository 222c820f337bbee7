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

#include "fr3/config.hpp"
#include "fr3/harness.hpp"
#include "fr3/scenario.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>

#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

namespace
{
    enum ExitCode : int
    {
        EXIT_OK = 0,
        EXIT_USAGE = 1,
        EXIT_CONFIG = 2,
        EXIT_DATA = 3
    };
}

int main(int argc, char **argv)
{
    CLI::App app{"fr3sim - stochastic channel simulator for 7-24 GHz"};
    app.require_subcommand(1);

    CLI::App *run = app.add_subcommand("run", "Simulate one drop and write links.csv, cdf_*.csv and manifest.txt");

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> scenario, sns, ue_sns, out, data;
    std::optional<double> fc;
    std::optional<std::size_t> n_ues;
    std::optional<int> workers;
    bool near_field = false, nf_angles = false, cir = false;
    std::vector<std::string> overrides;

    run->add_option("-c,--config", config_path, "Configuration file (INI sections run, layout, features, ...)");
    run->add_option("--seed", seed, "Master seed");
    run->add_option("--scenario", scenario, "Scenario name (SMa, UMa, UMi, InH, RMa)");
    run->add_option("--fc", fc, "Carrier frequency in GHz");
    run->add_flag("--near-field", near_field, "Enable spherical-wave synthesis");
    run->add_flag("--nf-angles", nf_angles, "Use element-wise angles with the near-field model");
    run->add_option("--sns", sns, "BS-side non-stationarity: off, stochastic or blocker");
    run->add_option("--ue-sns", ue_sns, "UE grip and head masks: on or off");
    run->add_option("--n-ues", n_ues, "Number of UEs in the drop");
    run->add_option("--workers", workers, "Worker threads");
    run->add_option("-o,--out", out, "Output directory");
    run->add_option("--data", data, "Parameter-table directory");
    run->add_flag("--cir", cir, "Also write one binary CIR file per link");
    run->add_option("--set", overrides, "Override a setting, e.g. --set features.pol_variability=true")->take_all();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        int rc = app.exit(e);
        return rc == 0 ? EXIT_OK : EXIT_USAGE;
    }

    try
    {
        fr3::RunConfig cfg = config_path.empty() ? fr3::RunConfig{} : fr3::load_config(config_path);
        if (seed)
            cfg.seed = *seed;
        if (scenario)
            cfg.scenario = *scenario;
        if (fc)
            cfg.fc = *fc;
        if (near_field)
            cfg.near_field = true;
        if (nf_angles)
            cfg.nf_angles = true;
        if (sns)
            cfg.sns = fr3::parse_sns_mode(*sns);
        if (ue_sns)
            fr3::set_config_value(cfg, "features.ue_sns", *ue_sns == "on" ? "true" : *ue_sns == "off" ? "false"
                                                                                                      : *ue_sns);
        if (n_ues)
            cfg.n_ues = *n_ues;
        if (workers)
            cfg.workers = *workers;
        if (out)
            cfg.out_dir = *out;
        if (data)
            cfg.data_dir = *data;
        if (cir)
            cfg.write_cir = true;
        for (const std::string &kv : overrides)
        {
            auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw fr3::ConfigError("--set expects section.key=value, got '" + kv + "'");
            fr3::set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
        }
        cfg.validate();

        fr3::RunResult r = fr3::run(cfg);
        fmt::print("{} links written to {}\n", r.links.size(), cfg.out_dir);
        return EXIT_OK;
    }
    catch (const fr3::ConfigError &e)
    {
        fmt::print(stderr, "configuration error: {}\n", e.what());
        return EXIT_CONFIG;
    }
    catch (const fr3::DataError &e)
    {
        fmt::print(stderr, "data error: {}\n", e.what());
        return EXIT_DATA;
    }
    catch (const std::exception &e)
    {
        fmt::print(stderr, "error: {}\n", e.what());
        return EXIT_USAGE;
    }
}

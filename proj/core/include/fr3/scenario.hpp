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

#ifndef FR3_SCENARIO_HPP
#define FR3_SCENARIO_HPP

#include "fr3/expression.hpp"
#include "fr3/rng.hpp"

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fr3
{
    // Propagation-state classes used to key parameter rows
    enum class StateClass
    {
        LOS,
        NLOS,
        O2I
    };
    const char *state_name(StateClass s);

    // Large-scale parameter channels. Order is the row/column order of the cross-correlation matrix.
    enum Lsp : int
    {
        LSP_SF = 0,
        LSP_K = 1,
        LSP_DS = 2,
        LSP_ASD = 3,
        LSP_ASA = 4,
        LSP_ZSD = 5,
        LSP_ZSA = 6,
        LSP_COUNT = 7
    };
    const char *lsp_name(int lsp);

    struct ParamEntry
    {
        std::string value; // raw text (number, expression or keyword)
        std::string units;
        std::string provenance; // paper | companion-standard | placeholder
        std::optional<Expression> expr;
    };

    class ScenarioParams
    {
    public:
        std::string name;
        std::string source; // file the table was read from

        // param -> state ("LOS", "NLOS", "O2I", "ALL") -> entry, kept in file order for saving
        std::map<std::string, std::map<std::string, ParamEntry>> table;
        std::vector<std::pair<std::string, std::string>> order;

        bool has(const std::string &key, StateClass s) const;
        bool has(const std::string &key) const; // ALL row
        const ParamEntry &entry(const std::string &key, StateClass s) const;
        const ParamEntry &entry(const std::string &key) const;

        double get(const std::string &key, StateClass s, const ExprVars &v = {}) const;
        double get(const std::string &key, const ExprVars &v = {}) const;
        double get_or(const std::string &key, double fallback, const ExprVars &v = {}) const;
        std::string text(const std::string &key) const;
        std::string text_or(const std::string &key, const std::string &fallback) const;

        // Cross-correlation matrix over all 7 LSP channels for a state. Missing pairs are 0.
        std::array<std::array<double, LSP_COUNT>, LSP_COUNT> correlation(StateClass s) const;
    };

    struct Material
    {
        double intercept = 0.0; // dB
        double slope = 0.0;     // dB per GHz
        std::string provenance;
    };

    struct O2IModelParams
    {
        std::string material_a, material_b;
        double weight_a = 0.0, weight_b = 0.0;
        double sigma_p = 0.0;
        std::string provenance;
    };

    struct AbsDelayParams
    {
        double mu_lg = 0.0, sigma_lg = 0.0, dcor = 0.0;
        std::string provenance;
    };

    struct ScalingTables
    {
        std::map<int, double> c_phi_nlos, c_theta_nlos;
        std::array<double, 4> c_phi_los_poly{}, c_theta_los_poly{};
    };

    struct UeMaskRow
    {
        std::string usage;
        double f_lo = 0.0, f_hi = 0.0; // GHz
        std::vector<double> atten_db;  // per handheld candidate element
    };

    struct Registry
    {
        std::map<std::string, ScenarioParams> scenarios;
        std::map<std::string, Material> materials;
        std::map<std::string, O2IModelParams> o2i_models;
        std::map<std::string, AbsDelayParams> abs_delay;
        ScalingTables scaling;
        std::vector<UeMaskRow> ue_masks;
        std::vector<std::pair<std::string, double>> ue_usage; // usage, probability
        std::vector<std::string> files;                      // every file consumed, sorted

        const ScenarioParams &scenario(const std::string &name) const;
    };

    // Raised for malformed or inconsistent parameter tables
    class DataError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Parse one scenario table from a stream; throws DataError naming the offending key
    ScenarioParams parse_scenario_table(std::istream &in, const std::string &name, const std::string &source = "");

    // Write a scenario table in the same format parse_scenario_table reads
    void save_scenario_table(const ScenarioParams &sc, std::ostream &out);

    // Check invariants of one scenario table (required keys, sigma >= 0, D1 <= D2, correlation bounds)
    void validate_scenario(const ScenarioParams &sc);

    // Load every parameter file below dir (scenarios/*.csv plus the shared tables)
    Registry load_parameter_tables(const std::string &dir);

    // Default data directory (compile-time path, overridable with the FR3SIM_DATA environment variable)
    std::string default_data_dir();

    enum class Location
    {
        Outdoor,
        Indoor,
        InCar
    };

    enum class O2IModel
    {
        None,
        Low,
        High,
        LowA
    };
    const char *o2i_name(O2IModel m);
    const char *location_name(Location l);

    enum class Building
    {
        None,
        Residential,
        Commercial
    };

    struct PropagationState
    {
        bool los = true;
        Location location = Location::Outdoor;
        O2IModel o2i_model = O2IModel::None;
        double d2D_in = 0.0;

        StateClass state_class() const
        {
            if (location == Location::Indoor)
                return StateClass::O2I;
            return los ? StateClass::LOS : StateClass::NLOS;
        }
    };

    double los_probability(const ScenarioParams &sc, double d2D, double h_UE);

    // Per-link inputs needed for state assignment
    struct StateInput
    {
        double d2D = 0.0;
        double h_UE = 1.5;
        bool indoor = false;
        bool in_car = false;
        Building building = Building::None;
    };

    struct StateOptions
    {
        std::optional<bool> force_los;
    };

    // Draw order per link: LOS uniform, d2D_in uniform, O2I model uniform (all three always consumed)
    PropagationState assign_state(const StateInput &in, const ScenarioParams &sc, Rng &rng, const StateOptions &opt = {});

    std::vector<PropagationState> assign_states(const std::vector<StateInput> &links, const ScenarioParams &sc, Rng &rng,
                                                const StateOptions &opt = {});
}

#endif

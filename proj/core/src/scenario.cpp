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

#include "fr3/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#ifndef FR3SIM_DEFAULT_DATA_DIR
#define FR3SIM_DEFAULT_DATA_DIR "data"
#endif

namespace fr3
{
    namespace fs = std::filesystem;

    const char *state_name(StateClass s)
    {
        switch (s)
        {
        case StateClass::LOS:
            return "LOS";
        case StateClass::NLOS:
            return "NLOS";
        case StateClass::O2I:
            return "O2I";
        }
        return "?";
    }

    const char *lsp_name(int lsp)
    {
        static const char *names[LSP_COUNT] = {"sf", "k", "ds", "asd", "asa", "zsd", "zsa"};
        if (lsp < 0 || lsp >= LSP_COUNT)
            throw std::invalid_argument("lsp_name: index out of range");
        return names[lsp];
    }

    const char *o2i_name(O2IModel m)
    {
        switch (m)
        {
        case O2IModel::None:
            return "none";
        case O2IModel::Low:
            return "low";
        case O2IModel::High:
            return "high";
        case O2IModel::LowA:
            return "low-A";
        }
        return "?";
    }

    const char *location_name(Location l)
    {
        switch (l)
        {
        case Location::Outdoor:
            return "outdoor";
        case Location::Indoor:
            return "indoor";
        case Location::InCar:
            return "in-car";
        }
        return "?";
    }

    namespace
    {
        const std::set<std::string> text_keys = {"pl_model", "los_model", "height_model", "o2i_res_model", "layout"};
        const std::set<std::string> provenances = {"paper", "companion-standard", "placeholder"};

        std::string trim(const std::string &s)
        {
            auto b = s.find_first_not_of(" \t\r\n");
            if (b == std::string::npos)
                return "";
            auto e = s.find_last_not_of(" \t\r\n");
            return s.substr(b, e - b + 1);
        }

        std::vector<std::string> split(const std::string &line, char sep)
        {
            std::vector<std::string> out;
            std::string cur;
            std::istringstream is(line);
            while (std::getline(is, cur, sep))
                out.push_back(trim(cur));
            if (!line.empty() && line.back() == sep)
                out.emplace_back();
            return out;
        }

        // Read a ';'-separated table, skipping comments, blank lines and the header row
        std::vector<std::vector<std::string>> read_rows(const std::string &path, std::size_t ncols)
        {
            std::ifstream f(path);
            if (!f)
                throw DataError("cannot open parameter file " + path);
            std::vector<std::vector<std::string>> rows;
            std::string line;
            bool header = true;
            int lineno = 0;
            while (std::getline(f, line))
            {
                ++lineno;
                std::string t = trim(line);
                if (t.empty() || t[0] == '#')
                    continue;
                if (header)
                {
                    header = false;
                    continue;
                }
                auto cols = split(t, ';');
                if (cols.size() != ncols)
                    throw DataError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(ncols) +
                                    " columns, got " + std::to_string(cols.size()));
                rows.push_back(cols);
            }
            return rows;
        }

        double to_number(const std::string &s, const std::string &where)
        {
            try
            {
                std::size_t used = 0;
                double v = std::stod(s, &used);
                if (used != s.size())
                    throw std::invalid_argument("trailing");
                return v;
            }
            catch (const std::exception &)
            {
                throw DataError(where + ": '" + s + "' is not a number");
            }
        }

        void check_provenance(const std::string &p, const std::string &where)
        {
            if (!provenances.count(p))
                throw DataError(where + ": unknown provenance '" + p + "'");
        }
    }

    bool ScenarioParams::has(const std::string &key, StateClass s) const
    {
        auto it = table.find(key);
        if (it == table.end())
            return false;
        return it->second.count(state_name(s)) || it->second.count("ALL");
    }

    bool ScenarioParams::has(const std::string &key) const
    {
        auto it = table.find(key);
        return it != table.end() && it->second.count("ALL");
    }

    const ParamEntry &ScenarioParams::entry(const std::string &key, StateClass s) const
    {
        auto it = table.find(key);
        if (it != table.end())
        {
            auto jt = it->second.find(state_name(s));
            if (jt != it->second.end())
                return jt->second;
            jt = it->second.find("ALL");
            if (jt != it->second.end())
                return jt->second;
        }
        throw DataError("scenario " + name + ": missing parameter '" + key + "' for state " + state_name(s));
    }

    const ParamEntry &ScenarioParams::entry(const std::string &key) const
    {
        auto it = table.find(key);
        if (it != table.end())
        {
            auto jt = it->second.find("ALL");
            if (jt != it->second.end())
                return jt->second;
        }
        throw DataError("scenario " + name + ": missing parameter '" + key + "'");
    }

    double ScenarioParams::get(const std::string &key, StateClass s, const ExprVars &v) const
    {
        const ParamEntry &e = entry(key, s);
        if (!e.expr)
            throw DataError("scenario " + name + ": parameter '" + key + "' is not numeric");
        return e.expr->eval(v);
    }

    double ScenarioParams::get(const std::string &key, const ExprVars &v) const
    {
        const ParamEntry &e = entry(key);
        if (!e.expr)
            throw DataError("scenario " + name + ": parameter '" + key + "' is not numeric");
        return e.expr->eval(v);
    }

    double ScenarioParams::get_or(const std::string &key, double fallback, const ExprVars &v) const
    {
        return has(key) ? get(key, v) : fallback;
    }

    std::string ScenarioParams::text(const std::string &key) const { return entry(key).value; }

    std::string ScenarioParams::text_or(const std::string &key, const std::string &fallback) const
    {
        return has(key) ? entry(key).value : fallback;
    }

    std::array<std::array<double, LSP_COUNT>, LSP_COUNT> ScenarioParams::correlation(StateClass s) const
    {
        std::array<std::array<double, LSP_COUNT>, LSP_COUNT> C{};
        for (int i = 0; i < LSP_COUNT; ++i)
            C[i][i] = 1.0;
        for (int i = 0; i < LSP_COUNT; ++i)
            for (int j = 0; j < LSP_COUNT; ++j)
            {
                if (i == j)
                    continue;
                std::string key = std::string("corr_") + lsp_name(i) + "_" + lsp_name(j);
                if (has(key, s))
                {
                    double v = get(key, s);
                    C[i][j] = v;
                    C[j][i] = v;
                }
            }
        return C;
    }

    const ScenarioParams &Registry::scenario(const std::string &name) const
    {
        auto it = scenarios.find(name);
        if (it == scenarios.end())
            throw DataError("unknown scenario '" + name + "'");
        return it->second;
    }

    ScenarioParams parse_scenario_table(std::istream &in, const std::string &name, const std::string &source)
    {
        ScenarioParams sc;
        sc.name = name;
        sc.source = source;
        std::string line;
        bool header = true;
        int lineno = 0;
        const std::string where0 = source.empty() ? name : source;
        while (std::getline(in, line))
        {
            ++lineno;
            std::string t = trim(line);
            if (t.empty() || t[0] == '#')
                continue;
            if (header)
            {
                header = false;
                continue;
            }
            auto cols = split(t, ';');
            std::string where = where0 + ":" + std::to_string(lineno);
            if (cols.size() != 5)
                throw DataError(where + ": expected 5 columns (parameter;state;value;units;provenance)");
            const std::string &key = cols[0], &state = cols[1];
            if (key.empty())
                throw DataError(where + ": empty parameter name");
            if (state != "LOS" && state != "NLOS" && state != "O2I" && state != "ALL")
                throw DataError(where + ": parameter '" + key + "' has unknown state '" + state + "'");
            check_provenance(cols[4], where + ": parameter '" + key + "'");
            if (sc.table[key].count(state))
                throw DataError(where + ": duplicate parameter '" + key + "' for state " + state);

            ParamEntry e{cols[2], cols[3], cols[4], std::nullopt};
            if (!text_keys.count(key))
            {
                try
                {
                    e.expr = Expression(e.value);
                }
                catch (const std::invalid_argument &ex)
                {
                    throw DataError(where + ": parameter '" + key + "': " + ex.what());
                }
            }
            sc.table[key][state] = std::move(e);
            sc.order.emplace_back(key, state);
        }
        return sc;
    }

    void save_scenario_table(const ScenarioParams &sc, std::ostream &out)
    {
        out << "parameter;state;value;units;provenance\n";
        for (const auto &[key, state] : sc.order)
        {
            const ParamEntry &e = sc.table.at(key).at(state);
            out << key << ';' << state << ';' << e.value << ';' << e.units << ';' << e.provenance << '\n';
        }
    }

    void validate_scenario(const ScenarioParams &sc)
    {
        static const char *general[] = {"pl_model", "los_model", "h_bs", "min_d2d", "indoor_ratio", "m_rays", "c_ds"};
        static const char *per_state[] = {"ds_mu", "ds_sigma", "asd_mu", "asd_sigma", "asa_mu", "asa_sigma",
                                          "zsa_mu", "zsa_sigma", "zsd_mu", "zsd_sigma", "sf_sigma", "r_tau",
                                          "xpr_mu", "xpr_sigma", "n_clusters", "c_asd", "c_asa", "c_zsa", "zeta",
                                          "dcor_sf", "dcor_ds", "dcor_asd", "dcor_asa", "dcor_zsd", "dcor_zsa"};
        for (const char *k : general)
            if (!sc.has(k))
                throw DataError("scenario " + sc.name + ": missing required parameter '" + std::string(k) + "'");

        std::vector<StateClass> states{StateClass::LOS, StateClass::NLOS};
        if (sc.get("indoor_ratio") > 0.0)
            states.push_back(StateClass::O2I);

        const double fcs[] = {0.5, 2.0, 6.0, 7.0, 10.0, 15.0, 24.0, 50.0, 100.0};
        const double ds[] = {10.0, 100.0, 1000.0, 5000.0};
        ExprVars v;
        v.hBS = sc.get("h_bs");

        for (StateClass s : states)
        {
            for (const char *k : per_state)
                if (!sc.has(k, s))
                    throw DataError("scenario " + sc.name + ": missing parameter '" + std::string(k) + "' for state " +
                                    state_name(s));
            if (s == StateClass::LOS)
                for (const char *k : {"k_mu", "k_sigma", "dcor_k"})
                    if (!sc.has(k, s))
                        throw DataError("scenario " + sc.name + ": missing parameter '" + std::string(k) +
                                        "' for state LOS");

            for (const auto &[key, states_map] : sc.table)
            {
                bool is_sigma = key.size() > 6 && key.compare(key.size() - 6, 6, "_sigma") == 0;
                bool is_dcor = key.rfind("dcor_", 0) == 0;
                bool is_corr = key.rfind("corr_", 0) == 0;
                if (!(is_sigma || is_dcor || is_corr) || !sc.has(key, s))
                    continue;
                for (double fc : fcs)
                    for (double d : ds)
                    {
                        v.fc = fc;
                        v.d2D = d;
                        double x = sc.get(key, s, v);
                        if (!std::isfinite(x) || (is_sigma && x < 0.0) || (is_dcor && !(x > 0.0)) ||
                            (is_corr && std::abs(x) > 1.0))
                            throw DataError("scenario " + sc.name + ": parameter '" + key + "' for state " +
                                            state_name(s) + " violates its range at fc=" + std::to_string(fc) + " GHz");
                    }
            }

            // symmetric storage: a pair given in both orders must agree
            for (int i = 0; i < LSP_COUNT; ++i)
                for (int j = i + 1; j < LSP_COUNT; ++j)
                {
                    std::string a = std::string("corr_") + lsp_name(i) + "_" + lsp_name(j);
                    std::string b = std::string("corr_") + lsp_name(j) + "_" + lsp_name(i);
                    if (sc.has(a, s) && sc.has(b, s) && sc.get(a, s) != sc.get(b, s))
                        throw DataError("scenario " + sc.name + ": non-symmetric correlation " + a + " vs " + b);
                }

            bool has_min = sc.has("n_min", s), has_max = sc.has("n_max", s);
            if (has_min != has_max)
                throw DataError("scenario " + sc.name + ": cluster range needs both n_min and n_max for state " +
                                state_name(s));
            if (has_min && sc.get("n_min", s) > sc.get("n_max", s))
                throw DataError("scenario " + sc.name + ": n_min > n_max for state " + state_name(s));
            if (sc.get("r_tau", s) < 1.0)
                throw DataError("scenario " + sc.name + ": r_tau < 1 for state " + state_name(s));
        }
    }

    std::string default_data_dir()
    {
        if (const char *env = std::getenv("FR3SIM_DATA"))
            return env;
        return FR3SIM_DEFAULT_DATA_DIR;
    }

    Registry load_parameter_tables(const std::string &dir)
    {
        Registry R;
        fs::path root(dir);
        if (!fs::is_directory(root))
            throw DataError("parameter directory not found: " + dir);

        fs::path scen = root / "scenarios";
        if (!fs::is_directory(scen))
            throw DataError("missing scenarios/ directory in " + dir);
        std::vector<fs::path> files;
        for (const auto &e : fs::directory_iterator(scen))
            if (e.path().extension() == ".csv")
                files.push_back(e.path());
        std::sort(files.begin(), files.end());
        for (const auto &p : files)
        {
            std::ifstream f(p);
            if (!f)
                throw DataError("cannot open " + p.string());
            std::string name = p.stem().string();
            ScenarioParams sc = parse_scenario_table(f, name, p.string());
            validate_scenario(sc);
            R.scenarios.emplace(name, std::move(sc));
            R.files.push_back(p.string());
        }

        auto mat = (root / "materials.csv").string();
        for (auto &r : read_rows(mat, 4))
        {
            check_provenance(r[3], mat + ": material " + r[0]);
            R.materials[r[0]] = {to_number(r[1], mat), to_number(r[2], mat), r[3]};
        }
        R.files.push_back(mat);

        auto o2i = (root / "o2i_models.csv").string();
        for (auto &r : read_rows(o2i, 7))
        {
            check_provenance(r[6], o2i + ": model " + r[0]);
            O2IModelParams m{r[1], r[3], to_number(r[2], o2i), to_number(r[4], o2i), to_number(r[5], o2i), r[6]};
            if (!R.materials.count(m.material_a) || !R.materials.count(m.material_b))
                throw DataError(o2i + ": model " + r[0] + " references an unknown material");
            if (m.sigma_p < 0.0 || m.weight_a < 0.0 || m.weight_b < 0.0)
                throw DataError(o2i + ": model " + r[0] + " has a negative weight or sigma");
            R.o2i_models[r[0]] = m;
        }
        R.files.push_back(o2i);

        auto ad = (root / "absolute_delay.csv").string();
        for (auto &r : read_rows(ad, 5))
        {
            check_provenance(r[4], ad + ": " + r[0]);
            AbsDelayParams a{to_number(r[1], ad), to_number(r[2], ad), to_number(r[3], ad), r[4]};
            if (a.sigma_lg < 0.0 || !(a.dcor > 0.0))
                throw DataError(ad + ": invalid row for " + r[0]);
            R.abs_delay[r[0]] = a;
        }
        R.files.push_back(ad);

        auto sf = (root / "scaling_factors.csv").string();
        for (auto &r : read_rows(sf, 4))
        {
            check_provenance(r[3], sf + ": " + r[0]);
            int n = int(to_number(r[1], sf));
            double v = to_number(r[2], sf);
            if (r[0] == "c_phi_nlos")
                R.scaling.c_phi_nlos[n] = v;
            else if (r[0] == "c_theta_nlos")
                R.scaling.c_theta_nlos[n] = v;
            else if (r[0] == "c_phi_los_poly" && n >= 0 && n < 4)
                R.scaling.c_phi_los_poly[n] = v;
            else if (r[0] == "c_theta_los_poly" && n >= 0 && n < 4)
                R.scaling.c_theta_los_poly[n] = v;
            else
                throw DataError(sf + ": unknown table '" + r[0] + "'");
        }
        R.files.push_back(sf);

        auto mk = (root / "ue_masks.csv").string();
        for (auto &r : read_rows(mk, 6))
        {
            check_provenance(r[5], mk + ": " + r[0]);
            double lo = to_number(r[1], mk), hi = to_number(r[2], mk);
            int el = int(to_number(r[3], mk));
            if (el < 0)
                throw DataError(mk + ": negative element index");
            auto it = std::find_if(R.ue_masks.begin(), R.ue_masks.end(), [&](const UeMaskRow &m)
                                   { return m.usage == r[0] && m.f_lo == lo && m.f_hi == hi; });
            if (it == R.ue_masks.end())
            {
                R.ue_masks.push_back({r[0], lo, hi, {}});
                it = R.ue_masks.end() - 1;
            }
            if (it->atten_db.size() <= std::size_t(el))
                it->atten_db.resize(el + 1, 0.0);
            it->atten_db[el] = to_number(r[4], mk);
        }
        R.files.push_back(mk);

        auto us = (root / "ue_usage.csv").string();
        double total = 0.0;
        for (auto &r : read_rows(us, 3))
        {
            check_provenance(r[2], us + ": " + r[0]);
            double p = to_number(r[1], us);
            if (p < 0.0 || p > 1.0)
                throw DataError(us + ": probability out of range for " + r[0]);
            R.ue_usage.emplace_back(r[0], p);
            total += p;
        }
        if (!R.ue_usage.empty() && std::abs(total - 1.0) > 1e-9)
            throw DataError(us + ": usage probabilities do not sum to 1");
        R.files.push_back(us);

        std::sort(R.files.begin(), R.files.end());
        return R;
    }

    double los_probability(const ScenarioParams &sc, double d2D, double h_UE)
    {
        if (d2D < 0.0)
            throw std::invalid_argument("los_probability: negative distance");
        const std::string model = sc.text("los_model");
        if (model == "always")
            return 1.0;
        if (model == "exponential")
        {
            double dc = sc.get("los_dc"), kappa = sc.get("los_kappa");
            return d2D <= dc ? 1.0 : std::exp(-(d2D - dc) / kappa);
        }
        if (model == "d1d2")
        {
            double d1 = sc.get("los_d1"), d2 = sc.get("los_d2");
            if (d2D <= d1)
                return 1.0;
            double p = d1 / d2D + std::exp(-d2D / d2) * (1.0 - d1 / d2D);
            if (sc.get_or("los_height_term", 0.0) != 0.0)
            {
                double c = h_UE <= 13.0 ? 0.0 : std::pow((h_UE - 13.0) / 10.0, 1.5);
                p *= 1.0 + c * 1.25 * std::pow(d2D / 100.0, 3) * std::exp(-d2D / 150.0);
            }
            return std::clamp(p, 0.0, 1.0);
        }
        if (model == "inh_mixed")
        {
            if (d2D <= 1.2)
                return 1.0;
            if (d2D < 6.5)
                return std::exp(-(d2D - 1.2) / 4.7);
            return std::exp(-(d2D - 6.5) / 32.6) * 0.32;
        }
        throw DataError("scenario " + sc.name + ": unknown los_model '" + model + "'");
    }

    PropagationState assign_state(const StateInput &in, const ScenarioParams &sc, Rng &rng, const StateOptions &opt)
    {
        PropagationState st;
        double u_los = rng.uniform();
        double u_din = rng.uniform();
        double u_o2i = rng.uniform();

        st.los = opt.force_los ? *opt.force_los : (u_los < los_probability(sc, in.d2D, in.h_UE));

        if (in.indoor)
        {
            st.location = Location::Indoor;
            bool residential = in.building == Building::Residential;
            double dmax = residential ? sc.get_or("d2d_in_res_max", 10.0) : sc.get_or("d2d_in_com_max", 25.0);
            st.d2D_in = u_din * dmax;
            if (residential)
            {
                std::string m = sc.text_or("o2i_res_model", "low-A");
                st.o2i_model = m == "low" ? O2IModel::Low : m == "high" ? O2IModel::High
                                                                       : O2IModel::LowA;
            }
            else
                st.o2i_model = u_o2i < sc.get_or("o2i_high_prob", 0.5) ? O2IModel::High : O2IModel::Low;
        }
        else
        {
            st.location = in.in_car ? Location::InCar : Location::Outdoor;
            st.o2i_model = O2IModel::None;
            st.d2D_in = 0.0;
        }
        return st;
    }

    std::vector<PropagationState> assign_states(const std::vector<StateInput> &links, const ScenarioParams &sc, Rng &rng,
                                                const StateOptions &opt)
    {
        std::vector<PropagationState> out;
        out.reserve(links.size());
        for (const auto &l : links)
            out.push_back(assign_state(l, sc, rng, opt));
        return out;
    }
}

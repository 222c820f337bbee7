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

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace fr3
{
    namespace
    {
        std::string trim(const std::string &s)
        {
            auto b = s.find_first_not_of(" \t\r\n"), e = s.find_last_not_of(" \t\r\n");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        }

        double to_double(const std::string &key, const std::string &v)
        {
            std::size_t pos = 0;
            double x;
            try
            {
                x = std::stod(v, &pos);
            }
            catch (const std::exception &)
            {
                throw ConfigError(key + ": not a number: '" + v + "'");
            }
            if (trim(v.substr(pos)).size())
                throw ConfigError(key + ": trailing characters in '" + v + "'");
            return x;
        }

        long long to_int(const std::string &key, const std::string &v)
        {
            double x = to_double(key, v);
            if (x != std::floor(x))
                throw ConfigError(key + ": expected an integer, got '" + v + "'");
            return (long long)x;
        }

        std::uint64_t to_u64(const std::string &key, const std::string &v)
        {
            std::size_t pos = 0;
            std::uint64_t x;
            try
            {
                x = std::stoull(v, &pos);
            }
            catch (const std::exception &)
            {
                throw ConfigError(key + ": not an unsigned integer: '" + v + "'");
            }
            if (trim(v.substr(pos)).size() || v.find('-') != std::string::npos)
                throw ConfigError(key + ": not an unsigned integer: '" + v + "'");
            return x;
        }

        bool to_bool(const std::string &key, const std::string &v)
        {
            std::string s = v;
            std::transform(s.begin(), s.end(), s.begin(), ::tolower);
            if (s == "1" || s == "true" || s == "on" || s == "yes")
                return true;
            if (s == "0" || s == "false" || s == "off" || s == "no")
                return false;
            throw ConfigError(key + ": expected a boolean, got '" + v + "'");
        }

        std::string num(double x) { return fmt::format("{}", x); }
        std::string flag(bool b) { return b ? "true" : "false"; }
        template <typename T>
        std::string opt(const std::optional<T> &o)
        {
            if (!o)
                return "";
            if constexpr (std::is_same_v<T, bool>)
                return flag(*o);
            else
                return num(double(*o));
        }

        ElementPattern pattern_of(const std::string &key, const std::string &v)
        {
            if (v == "isotropic")
                return ElementPattern::isotropic();
            if (v == "directional")
                return ElementPattern{};
            throw ConfigError(key + ": expected isotropic or directional, got '" + v + "'");
        }

        bool is_isotropic(const ElementPattern &p) { return p.max_gain == 0.0 && p.A_max == 0.0; }

        std::vector<Blocker> parse_blockers(const std::string &key, const std::string &v)
        {
            std::vector<Blocker> out;
            std::stringstream ss(v);
            std::string item;
            while (std::getline(ss, item, ';'))
            {
                if (trim(item).empty())
                    continue;
                std::stringstream is(item);
                std::vector<double> f;
                std::string tok;
                while (is >> tok)
                    f.push_back(to_double(key, tok));
                if (f.size() != 6)
                    throw ConfigError(key + ": each blocker needs x y z width height normal_azimuth");
                Blocker b;
                b.center = Vec3(f[0], f[1], f[2]);
                b.width = f[3];
                b.height = f[4];
                b.normal_azimuth = f[5];
                out.push_back(b);
            }
            return out;
        }

        using Setter = std::function<void(RunConfig &, const std::string &, const std::string &)>;
        using Getter = std::function<std::string(const RunConfig &)>;

        struct Field
        {
            Setter set;
            Getter get;
        };

        const std::map<std::string, Field> &fields()
        {
            static const std::map<std::string, Field> f = {
                {"run.scenario", {[](RunConfig &c, auto &, auto &v) { c.scenario = v; }, [](auto &c) { return c.scenario; }}},
                {"run.fc", {[](RunConfig &c, auto &k, auto &v) { c.fc = to_double(k, v); }, [](auto &c) { return num(c.fc); }}},
                {"run.bandwidth", {[](RunConfig &c, auto &k, auto &v) { c.bandwidth = to_double(k, v); }, [](auto &c) { return num(c.bandwidth); }}},
                {"run.seed", {[](RunConfig &c, auto &k, auto &v) { c.seed = to_u64(k, v); }, [](auto &c) { return std::to_string(c.seed); }}},
                {"run.drop", {[](RunConfig &c, auto &k, auto &v) { c.drop = to_u64(k, v); }, [](auto &c) { return std::to_string(c.drop); }}},
                {"run.n_ues", {[](RunConfig &c, auto &k, auto &v) { c.n_ues = to_u64(k, v); }, [](auto &c) { return std::to_string(c.n_ues); }}},
                {"run.workers", {[](RunConfig &c, auto &k, auto &v) { c.workers = int(to_int(k, v)); }, [](auto &c) { return std::to_string(c.workers); }}},
                {"run.snr_db", {[](RunConfig &c, auto &k, auto &v) { c.snr_db = to_double(k, v); }, [](auto &c) { return num(c.snr_db); }}},
                {"run.time_samples", {[](RunConfig &c, auto &k, auto &v) { c.time_samples = int(to_int(k, v)); }, [](auto &c) { return std::to_string(c.time_samples); }}},
                {"run.sample_interval", {[](RunConfig &c, auto &k, auto &v) { c.sample_interval = to_double(k, v); }, [](auto &c) { return num(c.sample_interval); }}},
                {"run.speed", {[](RunConfig &c, auto &k, auto &v) { c.speed = to_double(k, v); }, [](auto &c) { return num(c.speed); }}},
                {"run.heading", {[](RunConfig &c, auto &k, auto &v) { c.heading = to_double(k, v); }, [](auto &c) { return num(c.heading); }}},
                {"run.out", {[](RunConfig &c, auto &, auto &v) { c.out_dir = v; }, [](auto &c) { return c.out_dir; }}},
                {"run.data", {[](RunConfig &c, auto &, auto &v) { c.data_dir = v; }, [](auto &c) { return c.data_dir; }}},
                {"run.write_cir", {[](RunConfig &c, auto &k, auto &v) { c.write_cir = to_bool(k, v); }, [](auto &c) { return flag(c.write_cir); }}},
                {"run.strict", {[](RunConfig &c, auto &k, auto &v) { c.strict = to_bool(k, v); }, [](auto &c) { return flag(c.strict); }}},

                {"layout.kind", {[](RunConfig &c, auto &, auto &v) { c.layout = v; }, [](auto &c) { return c.layout; }}},
                {"layout.radius", {[](RunConfig &c, auto &k, auto &v) { c.radius = to_double(k, v); }, [](auto &c) { return num(c.radius); }}},
                {"layout.half_angle", {[](RunConfig &c, auto &k, auto &v) { c.half_angle = to_double(k, v); }, [](auto &c) { return num(c.half_angle); }}},
                {"layout.isd", {[](RunConfig &c, auto &k, auto &v) { c.isd = to_double(k, v); }, [](auto &c) { return opt(c.isd); }}},
                {"layout.h_bs", {[](RunConfig &c, auto &k, auto &v) { c.h_bs = to_double(k, v); }, [](auto &c) { return opt(c.h_bs); }}},
                {"layout.h_ue", {[](RunConfig &c, auto &k, auto &v) { c.h_ue = to_double(k, v); }, [](auto &c) { return opt(c.h_ue); }}},
                {"layout.min_d2d", {[](RunConfig &c, auto &k, auto &v) { c.min_d2d = to_double(k, v); }, [](auto &c) { return opt(c.min_d2d); }}},
                {"layout.downtilt", {[](RunConfig &c, auto &k, auto &v) { c.downtilt = to_double(k, v); }, [](auto &c) { return opt(c.downtilt); }}},
                {"layout.force_los", {[](RunConfig &c, auto &k, auto &v) { c.force_los = to_bool(k, v); }, [](auto &c) { return opt(c.force_los); }}},
                {"layout.force_indoor", {[](RunConfig &c, auto &k, auto &v) { c.force_indoor = to_bool(k, v); }, [](auto &c) { return opt(c.force_indoor); }}},

                {"features.near_field", {[](RunConfig &c, auto &k, auto &v) { c.near_field = to_bool(k, v); }, [](auto &c) { return flag(c.near_field); }}},
                {"features.nf_angles", {[](RunConfig &c, auto &k, auto &v) { c.nf_angles = to_bool(k, v); }, [](auto &c) { return flag(c.nf_angles); }}},
                {"features.nf_reference", {[](RunConfig &c, auto &k, auto &v) { c.nf_reference = to_bool(k, v); }, [](auto &c) { return flag(c.nf_reference); }}},
                {"features.n_spec", {[](RunConfig &c, auto &k, auto &v) { c.n_spec = int(to_int(k, v)); }, [](auto &c) { return opt(c.n_spec); }}},
                {"features.sns", {[](RunConfig &c, auto &, auto &v) { c.sns = parse_sns_mode(v); }, [](auto &c) { return std::string(sns_mode_name(c.sns)); }}},
                {"features.ue_sns", {[](RunConfig &c, auto &k, auto &v) { c.ue_sns = to_bool(k, v); }, [](auto &c) { return flag(c.ue_sns); }}},
                {"features.cluster_variability", {[](RunConfig &c, auto &k, auto &v) { c.cluster_variability = to_bool(k, v); }, [](auto &c) { return flag(c.cluster_variability); }}},
                {"features.pol_variability", {[](RunConfig &c, auto &k, auto &v) { c.pol_variability = to_bool(k, v); }, [](auto &c) { return flag(c.pol_variability); }}},
                {"features.absolute_delay", {[](RunConfig &c, auto &k, auto &v) { c.absolute_delay = to_bool(k, v); }, [](auto &c) { return flag(c.absolute_delay); }}},
                {"features.ray_count_scaling", {[](RunConfig &c, auto &k, auto &v) { c.ray_count_scaling = to_bool(k, v); }, [](auto &c) { return flag(c.ray_count_scaling); }}},
                {"features.sub_clusters", {[](RunConfig &c, auto &k, auto &v) { c.sub_clusters = to_bool(k, v); }, [](auto &c) { return flag(c.sub_clusters); }}},

                {"raycount.D_h", {[](RunConfig &c, auto &k, auto &v) { c.rc_D_h = to_double(k, v); }, [](auto &c) { return num(c.rc_D_h); }}},
                {"raycount.D_v", {[](RunConfig &c, auto &k, auto &v) { c.rc_D_v = to_double(k, v); }, [](auto &c) { return num(c.rc_D_v); }}},
                {"raycount.B", {[](RunConfig &c, auto &k, auto &v) { c.rc_B = to_double(k, v); }, [](auto &c) { return num(c.rc_B); }}},
                {"raycount.k", {[](RunConfig &c, auto &k, auto &v) { c.rc_k = to_double(k, v); }, [](auto &c) { return num(c.rc_k); }}},
                {"raycount.M_min", {[](RunConfig &c, auto &k, auto &v) { c.rc_M_min = int(to_int(k, v)); }, [](auto &c) { return std::to_string(c.rc_M_min); }}},
                {"raycount.M_max", {[](RunConfig &c, auto &k, auto &v) { c.rc_M_max = int(to_int(k, v)); }, [](auto &c) { return std::to_string(c.rc_M_max); }}},

                {"bs_array.Mg", {[](RunConfig &c, auto &k, auto &v) { c.bs_array.Mg = int(to_int(k, v)); }, [](auto &c) { return std::to_string(c.bs_array.Mg); }}},
                {"bs_array.Ng", {[](RunConfig &c, auto &k, auto &v) { c.bs_array.Ng = int(to_int(k, v)); }, [](auto &c) { return std::to_string(c.bs_array.Ng); }}},
                {"bs_array.M", {[](RunConfig &c, auto &k, auto &v) { c.bs_array.M = int(to_int(k, v)); }, [](auto &c) { return std::to_string(c.bs_array.M); }}},
                {"bs_array.N", {[](RunConfig &c, auto &k, auto &v) { c.bs_array.N = int(to_int(k, v)); }, [](auto &c) { return std::to_string(c.bs_array.N); }}},
                {"bs_array.P", {[](RunConfig &c, auto &k, auto &v) { c.bs_array.P = int(to_int(k, v)); }, [](auto &c) { return std::to_string(c.bs_array.P); }}},
                {"bs_array.d_H", {[](RunConfig &c, auto &k, auto &v) { c.bs_array.d_H = to_double(k, v); }, [](auto &c) { return num(c.bs_array.d_H); }}},
                {"bs_array.d_V", {[](RunConfig &c, auto &k, auto &v) { c.bs_array.d_V = to_double(k, v); }, [](auto &c) { return num(c.bs_array.d_V); }}},
                {"bs_array.d_gH", {[](RunConfig &c, auto &k, auto &v) { c.bs_array.d_gH = to_double(k, v); }, [](auto &c) { return num(c.bs_array.d_gH); }}},
                {"bs_array.d_gV", {[](RunConfig &c, auto &k, auto &v) { c.bs_array.d_gV = to_double(k, v); }, [](auto &c) { return num(c.bs_array.d_gV); }}},
                {"bs_array.slant_1", {[](RunConfig &c, auto &k, auto &v) { c.bs_array.slant_1 = to_double(k, v); }, [](auto &c) { return num(c.bs_array.slant_1); }}},
                {"bs_array.slant_2", {[](RunConfig &c, auto &k, auto &v) { c.bs_array.slant_2 = to_double(k, v); }, [](auto &c) { return num(c.bs_array.slant_2); }}},
                {"bs_array.pattern", {[](RunConfig &c, auto &k, auto &v) { c.bs_array.pattern = pattern_of(k, v); }, [](auto &c) { return std::string(is_isotropic(c.bs_array.pattern) ? "isotropic" : "directional"); }}},
                {"bs_array.bearing", {[](RunConfig &c, auto &k, auto &v) { c.bs_bearing = to_double(k, v); }, [](auto &c) { return num(c.bs_bearing); }}},

                {"ue_array.device", {[](RunConfig &c, auto &k, auto &v)
                                     {
                                         if (v == "handheld")
                                             c.ue_device = UEDevice::handheld();
                                         else if (v == "cpe")
                                             c.ue_device = UEDevice::cpe();
                                         else
                                             throw ConfigError(k + ": expected handheld or cpe");
                                     },
                                     [](auto &c) { return std::string(c.ue_device.kind == DeviceKind::CPE ? "cpe" : "handheld"); }}},
                {"ue_array.P", {[](RunConfig &c, auto &k, auto &v) { c.ue_P = int(to_int(k, v)); }, [](auto &c) { return std::to_string(c.ue_P); }}},
                {"ue_array.pattern", {[](RunConfig &c, auto &k, auto &v) { c.ue_pattern = pattern_of(k, v); }, [](auto &c) { return std::string(is_isotropic(c.ue_pattern) ? "isotropic" : "directional"); }}},
                {"ue_array.selected", {[](RunConfig &c, auto &k, auto &v)
                                       {
                                           c.ue_device.selected.clear();
                                           std::stringstream ss(v);
                                           std::string t;
                                           while (std::getline(ss, t, ','))
                                               if (!trim(t).empty())
                                                   c.ue_device.selected.push_back(std::size_t(to_int(k, trim(t))));
                                       },
                                       [](auto &c)
                                       {
                                           std::string s;
                                           for (std::size_t i = 0; i < c.ue_device.selected.size(); ++i)
                                               s += (i ? "," : "") + std::to_string(c.ue_device.selected[i]);
                                           return s;
                                       }}},

                {"blockers.list", {[](RunConfig &c, auto &k, auto &v) { c.blockers = parse_blockers(k, v); },
                                   [](auto &c)
                                   {
                                       std::string s;
                                       for (auto &b : c.blockers)
                                           s += fmt::format("{}{} {} {} {} {} {}", s.empty() ? "" : "; ", b.center.x(), b.center.y(),
                                                            b.center.z(), b.width, b.height, b.normal_azimuth);
                                       return s;
                                   }}},
            };
            return f;
        }
    }

    const char *sns_mode_name(SnsMode m)
    {
        switch (m)
        {
        case SnsMode::Stochastic:
            return "stochastic";
        case SnsMode::Blocker:
            return "blocker";
        default:
            return "off";
        }
    }

    SnsMode parse_sns_mode(const std::string &s)
    {
        if (s == "off")
            return SnsMode::Off;
        if (s == "stochastic")
            return SnsMode::Stochastic;
        if (s == "blocker")
            return SnsMode::Blocker;
        throw ConfigError("sns mode must be off, stochastic or blocker, got '" + s + "'");
    }

    void RunConfig::validate() const
    {
        if (!(fc >= 0.5 && fc <= 100.0))
            throw ConfigError("run.fc must lie in [0.5, 100] GHz");
        if (n_ues < 1)
            throw ConfigError("run.n_ues must be at least 1");
        if (!(bandwidth > 0.0))
            throw ConfigError("run.bandwidth must be positive");
        if (workers < 1)
            throw ConfigError("run.workers must be at least 1");
        if (time_samples < 1 || !(sample_interval >= 0.0))
            throw ConfigError("run.time_samples must be at least 1 and run.sample_interval non-negative");
        if (layout != "auto" && layout != "hex" && layout != "indoor" && layout != "single")
            throw ConfigError("layout.kind must be auto, hex, indoor or single");
        if (layout == "single" && !(radius > 0.0))
            throw ConfigError("layout.radius must be positive for a single-site layout");
        if (!(half_angle > 0.0 && half_angle <= 180.0))
            throw ConfigError("layout.half_angle must lie in (0, 180]");
        if (nf_angles && !near_field)
            throw ConfigError("features.nf_angles requires features.near_field");
        if (n_spec && *n_spec < 0)
            throw ConfigError("features.n_spec must be non-negative");
        if (sns == SnsMode::Blocker && blockers.empty())
            throw ConfigError("blocker SNS needs at least one entry in blockers.list");
        if (rc_M_min < 1 || rc_M_min > rc_M_max)
            throw ConfigError("raycount.M_min must satisfy 1 <= M_min <= M_max");
        if (!(rc_k > 0.0) || rc_D_h < 0.0 || rc_D_v < 0.0 || rc_B < 0.0)
            throw ConfigError("raycount values must be non-negative and k positive");
        if (ue_P != 1 && ue_P != 2)
            throw ConfigError("ue_array.P must be 1 or 2");
        for (auto &b : blockers)
            if (!(b.width > 0.0) || !(b.height > 0.0))
                throw ConfigError("blocker width and height must be positive");
        try
        {
            bs_array.validate();
            ue_pattern.validate();
        }
        catch (const ConfigError &)
        {
            throw;
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigError(e.what());
        }
    }

    void set_config_value(RunConfig &cfg, const std::string &key, const std::string &value)
    {
        auto it = fields().find(key);
        if (it == fields().end())
            throw ConfigError("unknown configuration key '" + key + "'");
        it->second.set(cfg, key, trim(value));
    }

    RunConfig parse_config(const std::string &text)
    {
        boost::property_tree::ptree pt;
        std::istringstream in(text);
        try
        {
            boost::property_tree::read_ini(in, pt);
        }
        catch (const boost::property_tree::ini_parser_error &e)
        {
            throw ConfigError(std::string("configuration syntax: ") + e.what());
        }
        RunConfig cfg;
        for (auto &sec : pt)
        {
            if (sec.second.empty())
                throw ConfigError("key '" + sec.first + "' outside of a section");
            for (auto &kv : sec.second)
                set_config_value(cfg, sec.first + "." + kv.first, kv.second.get_value<std::string>());
        }
        return cfg;
    }

    RunConfig load_config(const std::string &path)
    {
        std::ifstream f(path);
        if (!f)
            throw ConfigError("cannot open configuration file " + path);
        std::stringstream ss;
        ss << f.rdbuf();
        return parse_config(ss.str());
    }

    std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig &cfg)
    {
        std::vector<std::pair<std::string, std::string>> out;
        for (auto &[k, f] : fields())
            out.emplace_back(k, f.get(cfg));
        return out;
    }
}

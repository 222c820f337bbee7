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

#include "fr3/harness.hpp"
#include "fr3/drop.hpp"
#include "fr3/field.hpp"
#include "fr3/nearfield.hpp"
#include "fr3/sns.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;

namespace fr3
{
    namespace
    {
        constexpr double nan = std::numeric_limits<double>::quiet_NaN();

        double circular_spread(const std::vector<double> &p, const std::vector<double> &deg)
        {
            std::complex<double> acc = 0.0;
            double sum = 0.0;
            for (std::size_t i = 0; i < p.size(); ++i)
            {
                acc += p[i] * std::polar(1.0, deg[i] * deg2rad);
                sum += p[i];
            }
            double r = std::min(1.0, std::abs(acc) / sum);
            return r <= 0.0 ? 180.0 : std::sqrt(-2.0 * std::log(r)) * rad2deg;
        }

        double linear_spread(const std::vector<double> &p, const std::vector<double> &x)
        {
            double sum = 0.0, m1 = 0.0, m2 = 0.0;
            for (std::size_t i = 0; i < p.size(); ++i)
            {
                sum += p[i];
                m1 += p[i] * x[i];
                m2 += p[i] * x[i] * x[i];
            }
            m1 /= sum;
            m2 /= sum;
            return std::sqrt(std::max(0.0, m2 - m1 * m1));
        }

        // Everything shared by the workers of one run
        struct Context
        {
            const RunConfig &cfg;
            const Registry &R;
            const ScenarioParams &sc;
            SiteLayout layout;
            std::vector<UE> ues;
            double lambda = 0.0;
            double W = 0.0, H = 0.0; // BS array extent
            std::vector<std::array<double, 2>> plane;
            std::vector<std::size_t> ue_candidate;
            SnsConfig sns;
        };

        SiteLayout make_layout(const RunConfig &cfg, const ScenarioParams &sc)
        {
            std::string kind = cfg.layout == "auto" ? sc.text_or("layout", "hex") : cfg.layout;
            double h_bs = cfg.h_bs ? *cfg.h_bs : sc.get("h_bs");
            double tilt = cfg.downtilt ? *cfg.downtilt : sc.get_or("downtilt", 0.0);
            if (kind == "hex")
                return build_hex_layout(cfg.isd ? *cfg.isd : sc.get("isd"), 2, h_bs, 30.0, tilt);
            if (kind == "indoor")
                return build_indoor_layout(sc.get("room_width"), sc.get("room_depth"), int(sc.get("n_bs")), h_bs);
            if (kind == "single")
            {
                if (!(cfg.radius > 0.0))
                    throw ConfigError("single-site layout needs layout.radius");
                return build_single_site(h_bs, cfg.radius, cfg.half_angle, cfg.bs_bearing, tilt);
            }
            throw DataError("scenario " + sc.name + ": unknown layout '" + kind + "'");
        }

        // Maps every UE element to the nearest handheld candidate location (identity for the handheld device)
        std::vector<std::size_t> candidate_map(const RunConfig &cfg)
        {
            std::vector<CandidateLocation> hh = ue_candidate_locations(UEDevice::handheld());
            std::vector<CandidateLocation> dev = ue_candidate_locations(cfg.ue_device);
            std::vector<std::size_t> sel = cfg.ue_device.selected;
            if (sel.empty())
                for (std::size_t k = 0; k < dev.size(); ++k)
                    sel.push_back(k);
            std::vector<std::size_t> out;
            for (std::size_t k : sel)
            {
                std::size_t best = 0;
                for (std::size_t j = 1; j < hh.size(); ++j)
                    if ((hh[j].offset - dev[k].offset).norm() < (hh[best].offset - dev[k].offset).norm())
                        best = j;
                for (int p = 0; p < cfg.ue_P; ++p)
                    out.push_back(best);
            }
            return out;
        }

        LinkReport simulate_link(const Context &C, std::uint64_t i, CorrelatedField &field)
        {
            const RunConfig &cfg = C.cfg;
            const ScenarioParams &sc = C.sc;
            const std::uint64_t seed = cfg.seed, drop = cfg.drop;
            const UE &ue = C.ues[i];

            // Serving site and sector
            std::size_t site = 0;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < C.layout.sites.size(); ++k)
            {
                double d = C.layout.kind == LayoutKind::Hex
                               ? wrapped_distance_2d(C.layout, ue.position, k)
                               : (ue.position.head<2>() - C.layout.sites[k].position.head<2>()).norm();
                if (d < best)
                {
                    best = d;
                    site = k;
                }
            }
            const Site &S = C.layout.sites[site];
            Vec3 up = C.layout.kind == LayoutKind::Hex ? wrapped_position(C.layout, ue.position, S.position) : ue.position;
            up.z() = ue.position.z();
            double bearing = std::atan2(up.y() - S.position.y(), up.x() - S.position.x()) * rad2deg;
            std::size_t sector = 0;
            double cbest = -2.0;
            for (std::size_t k = 0; k < S.sectors.size(); ++k)
            {
                double c = std::cos((bearing - S.sectors[k].alpha) * deg2rad);
                if (c > cbest + 1e-12)
                {
                    cbest = c;
                    sector = k;
                }
            }
            const Orientation &bo = S.sectors[sector];
            LinkGeometry g = link_geometry(S.position, bo, up);

            // Propagation state
            Rng r_state(seed, drop, i, Step::State);
            StateOptions so;
            so.force_los = cfg.force_los;
            PropagationState st = assign_state({g.d2D, g.h_UE, ue.indoor, ue.in_car, ue.building}, sc, r_state, so);
            g.d2D_in = st.d2D_in;
            const StateClass s = st.state_class();
            const ExprVars vars{cfg.fc, g.d2D, g.h_UE, g.h_BS};
            const bool beyond = beyond_breakpoint(sc, g, cfg.fc);

            // Large-scale parameters
            FieldKey key{std::uint32_t(site), s, s == StateClass::O2I ? ue.floor : 0};
            auto normals = correlated_normals(field, sc, s, key, up.x(), up.y(), vars);
            LspSet lsp = draw_lsps(sc, s, normals, vars, beyond);

            LinkReport rep;
            bool oor = false;
            LargeScaleResult ls;
            ls.pl_outdoor = path_loss(sc, g, st, cfg.fc, {cfg.strict, &oor});
            if (st.location == Location::Indoor)
            {
                Rng r_o2i(seed, drop, i, Step::State, 1);
                O2ILoss o = o2i_penetration(C.R, st.o2i_model, cfg.fc, st.d2D_in, r_o2i);
                ls.pl_tw = o.pl_tw;
                ls.pl_in = o.pl_in;
                ls.penetration_random = o.random;
            }
            else if (st.location == Location::InCar)
            {
                Rng r_car(seed, drop, i, Step::State, 2);
                ls.pl_tw = sc.get_or("car_loss", 9.0);
                ls.penetration_random = r_car.normal(0.0, sc.get_or("car_loss_sigma", 5.0));
            }
            ls.sf = lsp.SF;
            ls.update_total();

            // Small-scale parameters
            Rng r_count(seed, drop, i, Step::ClusterCount);
            SmallScaleInputs in;
            in.N = draw_cluster_count(sc, s, r_count, cfg.cluster_variability);
            in.lsp = lsp;
            in.los = s == StateClass::LOS;
            in.o2i = s == StateClass::O2I;
            in.los_angles = {g.los_aoa, g.los_aod, g.los_zoa, g.los_zod};
            in.r_tau = sc.get("r_tau", s, vars);
            in.zeta = sc.get("zeta", s, vars);
            in.xpr_mu = sc.get("xpr_mu", s, vars);
            in.xpr_sigma = sc.get("xpr_sigma", s, vars);
            in.pol_variability = cfg.pol_variability;
            in.spreads = {lsp.ASA, lsp.ASD, lsp.ZSA, lsp.ZSD, sc.get("c_asa", s, vars), sc.get("c_asd", s, vars),
                          sc.get("c_zsa", s, vars), 0.375 * std::pow(10.0, sc.get("zsd_mu", s, vars))};
            const double c_DS = sc.get("c_ds", s, vars) * 1e-9;
            in.M = int(std::lround(sc.get("m_rays", s, vars)));
            if (cfg.ray_count_scaling)
            {
                RayCountConfig rc;
                rc.B = cfg.rc_B > 0.0 ? cfg.rc_B : cfg.bandwidth;
                rc.D_h = cfg.rc_D_h > 0.0 ? cfg.rc_D_h : C.W;
                rc.D_v = cfg.rc_D_v > 0.0 ? cfg.rc_D_v : C.H;
                rc.c_DS = c_DS;
                rc.c_ASD = in.spreads.c_asd;
                rc.c_ZSD = in.spreads.c_zsd;
                rc.k = cfg.rc_k;
                rc.M_min = cfg.rc_M_min;
                rc.M_max = cfg.rc_M_max;
                rc.fc = cfg.fc;
                in.M = ray_count(rc).M;
            }
            ClusterSet cs = generate_cluster_set(in, C.R.scaling, seed, drop, i);
            Rng r_phase(seed, drop, i, Step::Phase);
            PhaseGrid phases = draw_phases(cs.N, cs.M, r_phase);

            // Absolute delay
            AbsoluteDelay ad;
            if (cfg.absolute_delay)
            {
                auto it = C.R.abs_delay.find(sc.name);
                if (it == C.R.abs_delay.end())
                    throw DataError("no absolute-delay parameters for scenario " + sc.name);
                double x = field.value({std::uint32_t(site), StateClass::NLOS, 0}, FIELD_DTAU, it->second.dcor, up.x(),
                                       up.y());
                std::optional<double> L;
                if (sc.has("dtau_bound_L"))
                    L = sc.get("dtau_bound_L");
                ad = absolute_delay(it->second, s == StateClass::LOS, g.d3D, L, x);
            }

            // Arrays
            ArrayEndpoint tx = make_panel_endpoint(cfg.bs_array, S.position, bo, C.lambda);
            Rng r_mob(seed, drop, i, Step::Mobility);
            Orientation uo{r_mob.uniform(-180.0, 180.0), 0.0, 0.0};
            ArrayEndpoint rx = make_device_endpoint(cfg.ue_device, cfg.ue_pattern, cfg.ue_P, up, uo);

            SynthesisOptions opt;
            opt.fc = cfg.fc;
            double hd = cfg.heading * deg2rad;
            opt.velocity = cfg.speed * Vec3(std::cos(hd), std::sin(hd), 0.0);
            opt.times.resize(cfg.time_samples);
            for (int t = 0; t < cfg.time_samples; ++t)
                opt.times[t] = t * cfg.sample_interval;
            opt.sub_clusters = cfg.sub_clusters;
            opt.c_DS = c_DS;
            opt.los = in.los_angles;
            opt.d3D = g.d3D;

            NearFieldGeometry nf;
            if (cfg.near_field)
            {
                int n_spec = cfg.n_spec ? *cfg.n_spec : int(std::lround(sc.get_or("nf_n_spec", 0.0)));
                Rng r_nf(seed, drop, i, Step::NearField);
                nf = source_distances(cs, ray_delays(cs, c_DS, cfg.sub_clusters), g.d3D, ad.dtau, n_spec,
                                      sc.get_or("nf_alpha", 2.0), sc.get_or("nf_beta", 2.0), r_nf, S.position, up);
                opt.near_field = &nf;
                opt.nf_angles = cfg.nf_angles;
            }

            std::vector<std::vector<double>> alpha;
            std::vector<std::vector<std::vector<double>>> ray_alpha;
            std::vector<double> los_alpha, beta;
            if (cfg.sns == SnsMode::Stochastic)
            {
                std::vector<double> P = cs.P;
                P[0] += cs.P_los;
                Rng r_sns(seed, drop, i, Step::Sns);
                alpha = stochastic_sns(P, C.sns, C.plane, C.W, C.H, r_sns);
                opt.alpha = &alpha;
            }
            else if (cfg.sns == SnsMode::Blocker)
            {
                ray_alpha.assign(cs.N, std::vector<std::vector<double>>(cs.M, std::vector<double>(tx.size(), 1.0)));
                los_alpha.assign(tx.size(), 1.0);
                for (std::size_t e = 0; e < tx.size(); ++e)
                {
                    Vec3 a = tx.reference + tx.offsets[e];
                    auto gain = [&](const Vec3 &b)
                    {
                        double L = 0.0;
                        for (const Blocker &bl : cfg.blockers)
                            L += blocker_attenuation(bl, a, b, C.lambda, C.sns.L_max);
                        return std::pow(10.0, -std::min(L, C.sns.L_max) / 10.0);
                    };
                    los_alpha[e] = gain(up);
                    for (int n = 0; n < cs.N; ++n)
                        for (int m = 0; m < cs.M; ++m)
                        {
                            double d = cfg.near_field ? nf.d1[n][m] : g.d3D;
                            ray_alpha[n][m][e] = gain(a + d * direction(cs.ray_zod[n][m], cs.ray_aod[n][m]));
                        }
                }
                opt.ray_alpha = &ray_alpha;
                opt.los_alpha = &los_alpha;
            }
            if (cfg.ue_sns)
            {
                Rng r_ue(seed, drop, i, Step::UeSns);
                rep.usage = draw_usage(C.R, r_ue);
                beta = ue_sns_mask(rep.usage, cfg.fc, C.R, C.ue_candidate);
                opt.beta = &beta;
            }

            ChannelRealization Hc = synthesize(cs, tx, rx, phases, opt);
            Hc.link = i;
            rep.capacity = capacity(narrowband(Hc, 0), cfg.snr_db);
            rep.capacity_ff = nan;
            if (cfg.near_field && cfg.nf_reference)
            {
                SynthesisOptions ff = opt;
                ff.near_field = nullptr;
                ff.nf_angles = false;
                if (cfg.sns == SnsMode::Blocker)
                {
                    ff.ray_alpha = nullptr;
                    ff.los_alpha = nullptr;
                }
                rep.capacity_ff = capacity(narrowband(synthesize(cs, tx, rx, phases, ff), 0), cfg.snr_db);
            }
            shift_delays(Hc, ad.shift);
            apply_large_scale(Hc, ls);
            rep.coupling_loss = coupling_loss(Hc, 0);

            if (cfg.write_cir)
            {
                std::ofstream f(fs::path(cfg.out_dir) / fmt::format("link_{:06d}.cir", i), std::ios::binary);
                if (!f)
                    throw std::runtime_error("cannot write CIR file for link " + std::to_string(i));
                write_cir(f, Hc);
            }

            RaySpreads sp = ray_spreads(cs, in.los_angles);
            rep.link = i;
            rep.site = int(site);
            rep.sector = int(sector);
            rep.x = up.x();
            rep.y = up.y();
            rep.h_ue = g.h_UE;
            rep.d2D = g.d2D;
            rep.d3D = g.d3D;
            rep.state = state_name(s);
            rep.location = location_name(st.location);
            rep.o2i_model = o2i_name(st.o2i_model);
            rep.pl = ls.pl_outdoor;
            rep.o2i_loss = ls.pl_tw + ls.pl_in + ls.penetration_random;
            rep.sf = ls.sf;
            rep.total_loss = ls.total;
            rep.ds = sp.DS;
            rep.asa = sp.ASA;
            rep.asd = sp.ASD;
            rep.zsa = sp.ZSA;
            rep.zsd = sp.ZSD;
            rep.K = in.los ? lsp.K : nan;
            rep.n_clusters = cs.N;
            rep.m_rays = cs.M;
            rep.n_taps = int(Hc.n_taps());
            rep.gini = gini(ray_power_slots(cs));
            rep.dtau = ad.dtau;
            rep.pl_out_of_range = oor;
            return rep;
        }

        std::string fmt_num(double x)
        {
            if (std::isnan(x))
                return "nan";
            return fmt::format("{:.10g}", x);
        }
    }

    RaySpreads ray_spreads(const ClusterSet &cs, const LosAngles &los)
    {
        std::vector<double> p, tau, aoa, aod, zoa, zod;
        if (cs.los && cs.P_los > 0.0)
        {
            p.push_back(cs.P_los);
            tau.push_back(0.0);
            aoa.push_back(los.aoa);
            aod.push_back(los.aod);
            zoa.push_back(los.zoa);
            zod.push_back(los.zod);
        }
        for (int n = 0; n < cs.N; ++n)
            for (int m = 0; m < cs.M; ++m)
            {
                p.push_back(cs.P[n] / cs.M);
                tau.push_back(cs.delay(n));
                aoa.push_back(cs.ray_aoa[n][m]);
                aod.push_back(cs.ray_aod[n][m]);
                zoa.push_back(cs.ray_zoa[n][m]);
                zod.push_back(cs.ray_zod[n][m]);
            }
        RaySpreads r;
        if (p.empty())
            return r;
        r.DS = linear_spread(p, tau);
        r.ASA = circular_spread(p, aoa);
        r.ASD = circular_spread(p, aod);
        r.ZSA = linear_spread(p, zoa);
        r.ZSD = linear_spread(p, zod);
        return r;
    }

    double capacity(const Eigen::MatrixXcd &H, double snr_db)
    {
        if (H.size() == 0)
            return 0.0;
        if (!H.allFinite())
            throw std::invalid_argument("capacity: non-finite channel");
        const double rho = std::pow(10.0, snr_db / 10.0) / double(H.cols());
        Eigen::MatrixXcd G = H.rows() <= H.cols() ? Eigen::MatrixXcd(H * H.adjoint()) : Eigen::MatrixXcd(H.adjoint() * H);
        G *= rho;
        G.diagonal().array() += 1.0;
        Eigen::LLT<Eigen::MatrixXcd> llt(G);
        if (llt.info() != Eigen::Success)
            throw std::invalid_argument("capacity: matrix not positive definite");
        double c = 0.0;
        for (Eigen::Index k = 0; k < G.rows(); ++k)
            c += 2.0 * std::log2(std::real(llt.matrixL()(k, k)));
        return std::max(0.0, c);
    }

    double gini(std::vector<double> v)
    {
        if (v.empty())
            throw std::invalid_argument("gini: empty input");
        double sum = 0.0;
        for (double x : v)
        {
            if (x < 0.0 || !std::isfinite(x))
                throw std::invalid_argument("gini: values must be finite and non-negative");
            sum += x;
        }
        if (!(sum > 0.0))
            throw std::invalid_argument("gini: all-zero input");
        std::sort(v.begin(), v.end());
        const double n = double(v.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i)
            acc += (2.0 * double(i + 1) - n - 1.0) * v[i];
        return acc / (n * sum);
    }

    std::vector<double> ray_power_slots(const ClusterSet &cs)
    {
        const int slots = std::max(cs.M, 20);
        std::vector<double> out(std::size_t(cs.N) * slots, 0.0);
        for (int n = 0; n < cs.N; ++n)
            for (int m = 0; m < cs.M; ++m)
                out[std::size_t(n) * slots + m] = cs.P[n] / cs.M;
        return out;
    }

    std::vector<std::pair<double, double>> cdf_rows(std::vector<double> values)
    {
        if (values.empty())
            throw std::invalid_argument("emit_cdf: empty input");
        std::sort(values.begin(), values.end());
        std::vector<std::pair<double, double>> rows;
        const double n = double(values.size());
        for (std::size_t i = 0; i < values.size(); ++i)
        {
            double c = double(i + 1) / n;
            if (!rows.empty() && rows.back().first == values[i])
                rows.back().second = c;
            else
                rows.emplace_back(values[i], c);
        }
        return rows;
    }

    void emit_cdf(const std::vector<double> &values, const std::string &path)
    {
        auto rows = cdf_rows(values);
        std::ofstream f(path);
        if (!f)
            throw std::runtime_error("cannot write " + path);
        f << "value,cdf\n";
        for (auto &[v, c] : rows)
            f << fmt_num(v) << ',' << fmt_num(c) << '\n';
    }

    RunResult run_links(const RunConfig &cfg, const Registry &R)
    {
        cfg.validate();
        const ScenarioParams &sc = R.scenario(cfg.scenario);
        validate_scenario(sc);

        Context C{cfg, R, sc, make_layout(cfg, sc), {}, speed_of_light / (cfg.fc * 1e9), 0.0, 0.0, {}, {}, {}};
        DropOptions dopt;
        dopt.force_indoor = cfg.force_indoor;
        dopt.h_ue = cfg.h_ue;
        dopt.min_d2d = cfg.min_d2d;
        C.ues = drop_ues(C.layout, cfg.n_ues, sc, cfg.seed, cfg.drop, dopt);
        std::tie(C.W, C.H) = array_extent(cfg.bs_array, C.lambda);
        C.plane = array_plane_positions(cfg.bs_array, C.lambda);
        C.ue_candidate = candidate_map(cfg);
        if (cfg.sns != SnsMode::Off)
            C.sns = SnsConfig::from_scenario(sc);
        if (cfg.write_cir)
            fs::create_directories(cfg.out_dir);

        RunResult res;
        res.links.resize(cfg.n_ues);
        res.data_files = R.files;

        std::atomic<std::size_t> next{0};
        std::mutex err_mu;
        std::size_t err_link = std::numeric_limits<std::size_t>::max();
        std::exception_ptr err;

        auto worker = [&]()
        {
            CorrelatedField field(cfg.seed, cfg.drop);
            for (;;)
            {
                std::size_t i = next.fetch_add(1);
                if (i >= cfg.n_ues)
                    return;
                try
                {
                    res.links[i] = simulate_link(C, i, field);
                }
                catch (...)
                {
                    std::lock_guard<std::mutex> lk(err_mu);
                    if (i < err_link)
                    {
                        err_link = i;
                        err = std::current_exception();
                    }
                }
            }
        };

        const int nw = std::max(1, std::min<int>(cfg.workers, int(cfg.n_ues)));
        if (nw == 1)
            worker();
        else
        {
            std::vector<std::thread> pool;
            for (int w = 0; w < nw; ++w)
                pool.emplace_back(worker);
            for (auto &t : pool)
                t.join();
        }
        if (err)
            std::rethrow_exception(err);
        return res;
    }

    std::string links_csv(const RunResult &r)
    {
        std::string s = "link,site,sector,x,y,h_ue,d2d,d3d,state,location,o2i_model,pl_db,o2i_loss_db,sf_db,"
                        "total_loss_db,coupling_loss_db,capacity_bps_hz,capacity_ff_bps_hz,ds_ns,asa_deg,asd_deg,"
                        "zsa_deg,zsd_deg,k_db,n_clusters,m_rays,n_taps,gini,dtau_ns,usage,pl_out_of_range\n";
        for (const LinkReport &l : r.links)
        {
            s += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                             l.link, l.site, l.sector, fmt_num(l.x), fmt_num(l.y), fmt_num(l.h_ue), fmt_num(l.d2D),
                             fmt_num(l.d3D), l.state, l.location, l.o2i_model, fmt_num(l.pl), fmt_num(l.o2i_loss),
                             fmt_num(l.sf), fmt_num(l.total_loss), fmt_num(l.coupling_loss), fmt_num(l.capacity),
                             fmt_num(l.capacity_ff), fmt_num(l.ds * 1e9), fmt_num(l.asa), fmt_num(l.asd),
                             fmt_num(l.zsa), fmt_num(l.zsd), fmt_num(l.K), l.n_clusters, l.m_rays, l.n_taps,
                             fmt_num(l.gini), fmt_num(l.dtau * 1e9), l.usage, l.pl_out_of_range ? 1 : 0);
        }
        return s;
    }

    std::string sha256_file(const std::string &path)
    {
        std::ifstream f(path, std::ios::binary);
        if (!f)
            throw DataError("cannot read " + path);
        EVP_MD_CTX *ctx = EVP_MD_CTX_new();
        if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1)
        {
            EVP_MD_CTX_free(ctx);
            throw std::runtime_error("SHA-256 initialisation failed");
        }
        char buf[1 << 14];
        while (f)
        {
            f.read(buf, sizeof buf);
            if (f.gcount() > 0)
                EVP_DigestUpdate(ctx, buf, std::size_t(f.gcount()));
        }
        unsigned char md[EVP_MAX_MD_SIZE];
        unsigned int len = 0;
        EVP_DigestFinal_ex(ctx, md, &len);
        EVP_MD_CTX_free(ctx);
        std::string hex;
        for (unsigned int k = 0; k < len; ++k)
            hex += fmt::format("{:02x}", md[k]);
        return hex;
    }

    RunResult run(const RunConfig &cfg)
    {
        cfg.validate();
        const std::string dir = cfg.data_dir.empty() ? default_data_dir() : cfg.data_dir;
        Registry R = load_parameter_tables(dir);
        fs::create_directories(cfg.out_dir);
        RunResult res = run_links(cfg, R);

        const fs::path out(cfg.out_dir);
        {
            std::ofstream f(out / "links.csv", std::ios::binary);
            if (!f)
                throw std::runtime_error("cannot write links.csv");
            f << links_csv(res);
        }

        std::vector<double> cl, cap, gi, ds, gain;
        for (auto &l : res.links)
        {
            cl.push_back(l.coupling_loss);
            cap.push_back(l.capacity);
            gi.push_back(l.gini);
            ds.push_back(l.ds * 1e9);
            if (!std::isnan(l.capacity_ff))
                gain.push_back(l.capacity - l.capacity_ff);
        }
        emit_cdf(cl, (out / "cdf_coupling_loss.csv").string());
        emit_cdf(cap, (out / "cdf_capacity.csv").string());
        emit_cdf(gi, (out / "cdf_gini.csv").string());
        emit_cdf(ds, (out / "cdf_ds.csv").string());
        if (!gain.empty())
            emit_cdf(gain, (out / "cdf_nf_gain.csv").string());

        std::ofstream m(out / "manifest.txt", std::ios::binary);
        m << "fr3sim 0.1.0\n";
        m << "seed = " << cfg.seed << "\n";
        m << "data_dir = " << dir << "\n\n[config]\n";
        for (auto &[k, v] : config_echo(cfg))
            m << k << " = " << v << "\n";
        m << "\n[data]\n";
        for (const std::string &p : res.data_files)
            m << sha256_file(p) << "  " << fs::path(p).lexically_relative(dir).generic_string() << "\n";
        return res;
    }
}

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

#include "fr3/coefficients.hpp"
#include "fr3/nearfield.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace fr3
{
    namespace
    {
        constexpr double two_pi = 2.0 * std::numbers::pi;

        double ceil_count(double x)
        {
            // absorbs round-off such as 4 * 0.5 * 10e-9 * 4e8 = 8.000000000000002
            return std::ceil(x - 1e-9 * std::max(1.0, std::abs(x)));
        }

        Orientation euler_of(const Mat3 &R)
        {
            Orientation o;
            o.beta = -std::asin(std::clamp(R(2, 0), -1.0, 1.0)) * rad2deg;
            o.alpha = std::atan2(R(1, 0), R(0, 0)) * rad2deg;
            o.gamma = std::atan2(R(2, 1), R(2, 2)) * rad2deg;
            return o;
        }

        // Dense index over the (pattern, mount) pairs used by an endpoint
        struct GroupIndex
        {
            std::vector<std::array<int, 2>> combos;
            std::vector<int> of_element;

            explicit GroupIndex(const ArrayEndpoint &e)
            {
                std::map<std::array<int, 2>, int> seen;
                of_element.resize(e.size());
                for (std::size_t i = 0; i < e.size(); ++i)
                {
                    auto [it, fresh] = seen.emplace(e.element_group[i], int(combos.size()));
                    if (fresh)
                        combos.push_back(e.element_group[i]);
                    of_element[i] = it->second;
                }
            }
        };

        void check_endpoint(const ArrayEndpoint &e, const char *name)
        {
            if (e.size() == 0)
                throw std::invalid_argument(std::string("synthesize: empty ") + name + " array");
            if (e.element_group.size() != e.size())
                throw std::invalid_argument(std::string("synthesize: ") + name + " group table size mismatch");
            for (auto &g : e.element_group)
                if (g[0] < 0 || g[0] >= int(e.patterns.size()) || g[1] < 0 || g[1] >= int(e.mounts.size()))
                    throw std::invalid_argument(std::string("synthesize: ") + name + " group index out of range");
        }

        struct TapSpec
        {
            double delay = 0.0;
            int n = 0;
            std::vector<int> rays;
            bool los = false;
        };

        void put_u32(std::ostream &o, std::uint32_t v)
        {
            unsigned char b[4];
            for (int i = 0; i < 4; ++i)
                b[i] = static_cast<unsigned char>(v >> (8 * i));
            o.write(reinterpret_cast<const char *>(b), 4);
        }

        void put_u64(std::ostream &o, std::uint64_t v)
        {
            unsigned char b[8];
            for (int i = 0; i < 8; ++i)
                b[i] = static_cast<unsigned char>(v >> (8 * i));
            o.write(reinterpret_cast<const char *>(b), 8);
        }

        void put_f64(std::ostream &o, double v)
        {
            std::uint64_t u;
            std::memcpy(&u, &v, 8);
            put_u64(o, u);
        }

        void put_f32(std::ostream &o, float v)
        {
            std::uint32_t u;
            std::memcpy(&u, &v, 4);
            put_u32(o, u);
        }

        std::uint64_t get_bytes(std::istream &in, int n)
        {
            unsigned char b[8] = {};
            if (!in.read(reinterpret_cast<char *>(b), n))
                throw std::invalid_argument("read_cir: truncated stream");
            std::uint64_t v = 0;
            for (int i = 0; i < n; ++i)
                v |= std::uint64_t(b[i]) << (8 * i);
            return v;
        }

        double get_f64(std::istream &in)
        {
            std::uint64_t u = get_bytes(in, 8);
            double v;
            std::memcpy(&v, &u, 8);
            return v;
        }

        float get_f32(std::istream &in)
        {
            std::uint32_t u = std::uint32_t(get_bytes(in, 4));
            float v;
            std::memcpy(&v, &u, 4);
            return v;
        }

        const char cir_magic[8] = {'F', 'R', '3', 'C', 'I', 'R', '1', '\0'};
    }

    PhaseGrid draw_phases(int N, int M, Rng &rng)
    {
        PhaseGrid ph(N, std::vector<std::array<double, 4>>(M));
        for (auto &row : ph)
            for (auto &p : row)
                for (double &x : p)
                    x = rng.uniform(-std::numbers::pi, std::numbers::pi);
        return ph;
    }

    void RayCountConfig::validate() const
    {
        if (!(B > 0.0))
            throw std::invalid_argument("ray count: bandwidth must be positive");
        if (M_min < 1 || M_min > M_max)
            throw std::invalid_argument("ray count: need 1 <= M_min <= M_max");
        if (!(k > 0.0) || !(fc > 0.0))
            throw std::invalid_argument("ray count: k and fc must be positive");
        if (D_h < 0.0 || D_v < 0.0 || c_DS < 0.0 || c_ASD < 0.0 || c_ZSD < 0.0)
            throw std::invalid_argument("ray count: negative aperture or spread");
    }

    RayCount ray_count(const RayCountConfig &cfg)
    {
        cfg.validate();
        const double lambda = speed_of_light / (cfg.fc * 1e9);
        RayCount r;
        r.M_t = int(ceil_count(4.0 * cfg.k * cfg.c_DS * cfg.B));
        r.M_AOD = int(ceil_count(4.0 * cfg.k * cfg.c_ASD * std::numbers::pi * cfg.D_h / (180.0 * lambda)));
        r.M_ZOD = int(ceil_count(4.0 * cfg.k * cfg.c_ZSD * std::numbers::pi * cfg.D_v / (180.0 * lambda)));
        long long prod = (long long)r.M_t * r.M_AOD * r.M_ZOD;
        r.M = int(std::min<long long>(std::max<long long>(prod, cfg.M_min), cfg.M_max));
        return r;
    }

    SubClusterMap sub_cluster_map(int M)
    {
        SubClusterMap s;
        s.rays = sub_cluster_groups(M);
        return s;
    }

    RayGrid ray_delays(const ClusterSet &cs, double c_DS, bool sub_clusters)
    {
        RayGrid d(cs.N);
        for (int n = 0; n < cs.N; ++n)
        {
            d[n].assign(cs.ray_aoa.empty() ? cs.M : cs.ray_aoa[n].size(), cs.delay(n));
            if (sub_clusters && (n == cs.strongest[0] || n == cs.strongest[1]))
            {
                SubClusterMap map = sub_cluster_map(int(d[n].size()));
                for (int i = 0; i < 3; ++i)
                    for (int m : map.rays[i])
                        d[n][m] += map.delay_factor[i] * c_DS;
            }
        }
        return d;
    }

    ArrayEndpoint make_panel_endpoint(const PanelArray &a, const Vec3 &reference, const Orientation &o,
                                      double wavelength)
    {
        a.validate();
        ArrayEndpoint e;
        e.reference = reference;
        e.mounts.push_back(o);
        const Mat3 R = rotation(o);
        std::vector<Vec3> pos = element_positions(a, wavelength);
        std::vector<double> slants = element_slants(a);
        std::map<double, int> by_slant;
        for (std::size_t i = 0; i < pos.size(); ++i)
        {
            e.offsets.push_back(R * pos[i]);
            auto [it, fresh] = by_slant.emplace(slants[i], int(e.patterns.size()));
            if (fresh)
            {
                ElementPattern p = a.pattern;
                p.slant = slants[i];
                e.patterns.push_back(p);
            }
            e.element_group.push_back({it->second, 0});
        }
        return e;
    }

    ArrayEndpoint make_device_endpoint(const UEDevice &d, const ElementPattern &pattern, int P, const Vec3 &reference,
                                       const Orientation &o)
    {
        if (P != 1 && P != 2)
            throw std::invalid_argument("make_device_endpoint: P must be 1 or 2");
        pattern.validate();
        std::vector<CandidateLocation> cand = ue_candidate_locations(d);
        std::vector<std::size_t> sel = d.selected;
        if (sel.empty())
            for (std::size_t i = 0; i < cand.size(); ++i)
                sel.push_back(i);

        ArrayEndpoint e;
        e.reference = reference;
        ElementPattern p0 = pattern;
        e.patterns.push_back(p0);
        if (P == 2)
        {
            ElementPattern p1 = pattern;
            p1.slant = pattern.slant + 90.0;
            e.patterns.push_back(p1);
        }
        const Mat3 R = rotation(o);
        for (std::size_t k : sel)
        {
            if (k >= cand.size())
                throw std::invalid_argument("make_device_endpoint: selected candidate out of range");
            e.mounts.push_back(euler_of(R * rotation(cand[k].orientation)));
            for (int p = 0; p < P; ++p)
            {
                e.offsets.push_back(R * cand[k].offset);
                e.element_group.push_back({p, int(e.mounts.size()) - 1});
            }
        }
        return e;
    }

    ChannelRealization synthesize(const ClusterSet &cs, const ArrayEndpoint &tx, const ArrayEndpoint &rx,
                                  const PhaseGrid &phases, const SynthesisOptions &opt)
    {
        check_endpoint(tx, "tx");
        check_endpoint(rx, "rx");
        if (!(opt.fc > 0.0) || opt.times.empty())
            throw std::invalid_argument("synthesize: need fc > 0 and at least one time sample");
        if (int(phases.size()) != cs.N || int(cs.ray_aoa.size()) != cs.N || int(cs.P.size()) != cs.N ||
            int(cs.kappa.size()) != cs.N || int(cs.eta.size()) != cs.N)
            throw std::invalid_argument("synthesize: cluster arrays do not match N");
        for (int n = 0; n < cs.N; ++n)
            if (int(phases[n].size()) != cs.M || int(cs.ray_aoa[n].size()) != cs.M || int(cs.kappa[n].size()) != cs.M ||
                int(cs.eta[n].size()) != cs.M)
                throw std::invalid_argument("synthesize: ray arrays do not match M");
        const NearFieldGeometry *nf = opt.near_field;
        if (nf && (int(nf->d1.size()) != cs.N))
            throw std::invalid_argument("synthesize: near-field geometry does not match the cluster set");
        if (opt.nf_angles && !nf)
            throw std::invalid_argument("synthesize: element-wise angles need near-field geometry");

        const int U = int(rx.size()), S = int(tx.size()), T = int(opt.times.size());
        if (opt.beta && int(opt.beta->size()) != U)
            throw std::invalid_argument("synthesize: UE attenuation size mismatch");
        if (opt.alpha && (int(opt.alpha->size()) != cs.N))
            throw std::invalid_argument("synthesize: BS attenuation size mismatch");
        if (opt.los_alpha && int(opt.los_alpha->size()) != S)
            throw std::invalid_argument("synthesize: direct-path attenuation size mismatch");

        const double lambda = speed_of_light / (opt.fc * 1e9);
        const double k0 = two_pi / lambda;

        ChannelRealization H;
        H.U = U;
        H.S = S;
        H.T = T;
        H.fc = opt.fc;
        H.lambda = lambda;

        // Tap layout
        std::vector<TapSpec> specs;
        for (int n = 0; n < cs.N; ++n)
        {
            bool split = opt.sub_clusters && (n == cs.strongest[0] || n == cs.strongest[1]);
            if (split)
            {
                SubClusterMap map = sub_cluster_map(cs.M);
                for (int i = 0; i < 3; ++i)
                {
                    if (map.rays[i].empty())
                        continue;
                    specs.push_back({cs.delay(n) + map.delay_factor[i] * opt.c_DS, n, map.rays[i], n == 0 && i == 0});
                }
            }
            else
            {
                std::vector<int> all(cs.M);
                for (int m = 0; m < cs.M; ++m)
                    all[m] = m;
                specs.push_back({cs.delay(n), n, all, n == 0});
            }
        }
        std::stable_sort(specs.begin(), specs.end(), [](const TapSpec &a, const TapSpec &b)
                         { return a.delay < b.delay; });

        GroupIndex gtx(tx), grx(rx);
        std::vector<FieldPair> ftx(gtx.combos.size()), frx(grx.combos.size());

        auto field_tx = [&](int combo, double zen, double az)
        {
            auto [p, h] = gtx.combos[combo];
            return field_pattern(tx.patterns[p], tx.mounts[h], zen, az);
        };
        auto field_rx = [&](int combo, double zen, double az)
        {
            auto [p, h] = grx.combos[combo];
            return field_pattern(rx.patterns[p], rx.mounts[h], zen, az);
        };

        std::vector<Vec3> tx_abs(S), rx_abs(U);
        for (int s = 0; s < S; ++s)
            tx_abs[s] = tx.reference + tx.offsets[s];
        for (int u = 0; u < U; ++u)
            rx_abs[u] = rx.reference + rx.offsets[u];

        H.delays.reserve(specs.size());
        H.taps.reserve(specs.size());
        for (const TapSpec &ts : specs)
        {
            const int n = ts.n;
            const int R = int(ts.rays.size());
            const double amp = std::sqrt(cs.P[n] / cs.M);
            Eigen::MatrixXcd A(S, 2 * R), B(U, 2 * R);
            std::vector<std::vector<cdouble>> dopp(R, std::vector<cdouble>(T));

            for (int r = 0; r < R; ++r)
            {
                const int m = ts.rays[r];
                const double zod = cs.ray_zod[n][m], aod = cs.ray_aod[n][m];
                const double zoa = cs.ray_zoa[n][m], aoa = cs.ray_aoa[n][m];
                const Vec3 rt = direction(zod, aod), rr = direction(zoa, aoa);

                // Polarization matrix
                const auto &ph = phases[n][m];
                const auto &eta = cs.eta[n][m];
                const double ki = 1.0 / cs.kappa[n][m];
                Eigen::Matrix2cd Pm;
                Pm(0, 0) = std::polar(std::sqrt(eta[0]), ph[0]);
                Pm(0, 1) = std::polar(std::sqrt(eta[1] * ki), ph[1]);
                Pm(1, 0) = std::polar(std::sqrt(eta[2] * ki), ph[2]);
                Pm(1, 1) = std::polar(std::sqrt(eta[3]), ph[3]);

                if (!opt.nf_angles)
                {
                    for (std::size_t c = 0; c < ftx.size(); ++c)
                        ftx[c] = field_tx(int(c), zod, aod);
                    for (std::size_t c = 0; c < frx.size(); ++c)
                        frx[c] = field_rx(int(c), zoa, aoa);
                }

                for (int s = 0; s < S; ++s)
                {
                    FieldPair f;
                    if (opt.nf_angles)
                    {
                        ElementAngles ea = element_wise_angles(nf->p_tx[n][m], tx_abs[s]);
                        f = field_tx(gtx.of_element[s], ea.zenith, ea.azimuth);
                    }
                    else
                        f = ftx[gtx.of_element[s]];
                    cdouble a = nf ? nlos_element_phase(tx.offsets[s], nf->d1[n][m], rt, lambda)
                                   : std::polar(1.0, k0 * rt.dot(tx.offsets[s]));
                    double w = amp;
                    if (opt.ray_alpha)
                        w *= std::sqrt((*opt.ray_alpha)[n][m][s]);
                    else if (opt.alpha)
                        w *= std::sqrt((*opt.alpha)[n][s]);
                    A(s, 2 * r) = a * (w * f.theta);
                    A(s, 2 * r + 1) = a * (w * f.phi);
                }
                for (int u = 0; u < U; ++u)
                {
                    FieldPair f;
                    if (opt.nf_angles)
                    {
                        ElementAngles ea = element_wise_angles(nf->p_rx[n][m], rx_abs[u]);
                        f = field_rx(grx.of_element[u], ea.zenith, ea.azimuth);
                    }
                    else
                        f = frx[grx.of_element[u]];
                    cdouble a = nf ? nlos_element_phase(rx.offsets[u], nf->d2[n][m], rr, lambda)
                                   : std::polar(1.0, k0 * rr.dot(rx.offsets[u]));
                    if (opt.beta)
                        a *= std::sqrt((*opt.beta)[u]);
                    B(u, 2 * r) = a * (f.theta * Pm(0, 0) + f.phi * Pm(1, 0));
                    B(u, 2 * r + 1) = a * (f.theta * Pm(0, 1) + f.phi * Pm(1, 1));
                }
                const double fd = k0 * rr.dot(opt.velocity);
                for (int t = 0; t < T; ++t)
                    dopp[r][t] = std::polar(1.0, fd * opt.times[t]);
            }

            std::vector<cdouble> tap(std::size_t(U) * S * T);
            Eigen::MatrixXcd Bt(U, 2 * R), Ht(U, S);
            for (int t = 0; t < T; ++t)
            {
                for (int r = 0; r < R; ++r)
                {
                    Bt.col(2 * r) = B.col(2 * r) * dopp[r][t];
                    Bt.col(2 * r + 1) = B.col(2 * r + 1) * dopp[r][t];
                }
                Ht.noalias() = Bt * A.transpose();
                for (int u = 0; u < U; ++u)
                    for (int s = 0; s < S; ++s)
                        tap[(std::size_t(u) * S + s) * T + t] = Ht(u, s);
            }

            if (ts.los && cs.los && cs.P_los > 0.0)
            {
                const double wl = std::sqrt(cs.P_los);
                const Vec3 rt = direction(opt.los.zod, opt.los.aod), rr = direction(opt.los.zoa, opt.los.aoa);
                for (std::size_t c = 0; c < ftx.size(); ++c)
                    ftx[c] = field_tx(int(c), opt.los.zod, opt.los.aod);
                for (std::size_t c = 0; c < frx.size(); ++c)
                    frx[c] = field_rx(int(c), opt.los.zoa, opt.los.aoa);
                std::vector<cdouble> atx(S), arx(U);
                for (int s = 0; s < S; ++s)
                    atx[s] = std::polar(1.0, k0 * rt.dot(tx.offsets[s]));
                for (int u = 0; u < U; ++u)
                    arx[u] = std::polar(1.0, k0 * rr.dot(rx.offsets[u]));
                const cdouble ref = std::polar(1.0, -k0 * opt.d3D);
                const double fd = k0 * rr.dot(opt.velocity);
                for (int u = 0; u < U; ++u)
                {
                    double bu = opt.beta ? std::sqrt((*opt.beta)[u]) : 1.0;
                    for (int s = 0; s < S; ++s)
                    {
                        FieldPair ft, fr;
                        if (opt.nf_angles)
                        {
                            Vec3 v = rx_abs[u] - tx_abs[s];
                            double zd, ad, za, aa;
                            angles_of(v, zd, ad);
                            angles_of(Vec3(-v), za, aa);
                            ft = field_tx(gtx.of_element[s], zd, ad);
                            fr = field_rx(grx.of_element[u], za, aa);
                        }
                        else
                        {
                            ft = ftx[gtx.of_element[s]];
                            fr = frx[grx.of_element[u]];
                        }
                        double as = 1.0;
                        if (opt.los_alpha)
                            as = std::sqrt((*opt.los_alpha)[s]);
                        else if (opt.alpha)
                            as = std::sqrt((*opt.alpha)[0][s]);
                        cdouble phase = nf ? los_element_phase(tx_abs[s], rx_abs[u], lambda) : ref * atx[s] * arx[u];
                        cdouble g = wl * bu * as * (fr.theta * ft.theta - fr.phi * ft.phi) * phase;
                        for (int t = 0; t < T; ++t)
                            tap[(std::size_t(u) * S + s) * T + t] += g * std::polar(1.0, fd * opt.times[t]);
                    }
                }
            }

            H.delays.push_back(ts.delay);
            H.taps.push_back(std::move(tap));
        }
        return H;
    }

    AbsoluteDelay absolute_delay(const AbsDelayParams &p, bool los, double d3D, std::optional<double> L_bound, double x)
    {
        AbsoluteDelay a;
        if (los)
        {
            a.shift = d3D / speed_of_light;
            return a;
        }
        a.dtau = std::pow(10.0, p.mu_lg + p.sigma_lg * x);
        if (L_bound)
        {
            double bound = 2.0 * *L_bound / speed_of_light;
            if (a.dtau > bound)
            {
                a.dtau = bound;
                a.clamped = true;
            }
        }
        a.shift = d3D / speed_of_light + a.dtau;
        return a;
    }

    AbsoluteDelay absolute_delay(const AbsDelayParams &p, bool los, double d3D, std::optional<double> L_bound, Rng &rng)
    {
        return absolute_delay(p, los, d3D, L_bound, rng.normal());
    }

    void shift_delays(ChannelRealization &H, double shift)
    {
        for (double &d : H.delays)
            d += shift;
    }

    void apply_large_scale(ChannelRealization &H, const LargeScaleResult &ls)
    {
        const double g = std::pow(10.0, -ls.total / 20.0);
        for (auto &tap : H.taps)
            for (cdouble &x : tap)
                x *= g;
    }

    double coupling_loss(const ChannelRealization &H, int t)
    {
        if (t < 0 || t >= H.T)
            throw std::invalid_argument("coupling_loss: time index out of range");
        double e = 0.0;
        for (const auto &tap : H.taps)
            for (int u = 0; u < H.U; ++u)
                for (int s = 0; s < H.S; ++s)
                    e += std::norm(tap[(std::size_t(u) * H.S + s) * H.T + t]);
        e /= double(H.U) * H.S;
        if (!(e > 0.0))
            throw std::invalid_argument("coupling_loss: zero-energy channel");
        return -10.0 * std::log10(e);
    }

    Eigen::MatrixXcd narrowband(const ChannelRealization &H, int t)
    {
        if (t < 0 || t >= H.T)
            throw std::invalid_argument("narrowband: time index out of range");
        Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(H.U, H.S);
        for (const auto &tap : H.taps)
            for (int u = 0; u < H.U; ++u)
                for (int s = 0; s < H.S; ++s)
                    M(u, s) += tap[(std::size_t(u) * H.S + s) * H.T + t];
        return M;
    }

    void write_cir(std::ostream &out, const ChannelRealization &H)
    {
        out.write(cir_magic, 8);
        put_u32(out, std::uint32_t(H.U));
        put_u32(out, std::uint32_t(H.S));
        put_u32(out, std::uint32_t(H.T));
        put_u32(out, std::uint32_t(H.n_taps()));
        put_f64(out, H.fc * 1e9);
        for (std::size_t k = 0; k < H.n_taps(); ++k)
        {
            put_f64(out, H.delays[k]);
            for (const cdouble &x : H.taps[k])
            {
                put_f32(out, float(x.real()));
                put_f32(out, float(x.imag()));
            }
        }
        if (!out)
            throw std::runtime_error("write_cir: write failed");
    }

    ChannelRealization read_cir(std::istream &in)
    {
        char magic[8];
        if (!in.read(magic, 8) || std::memcmp(magic, cir_magic, 8) != 0)
            throw std::invalid_argument("read_cir: bad magic");
        ChannelRealization H;
        H.U = int(get_bytes(in, 4));
        H.S = int(get_bytes(in, 4));
        H.T = int(get_bytes(in, 4));
        std::size_t n = get_bytes(in, 4);
        H.fc = get_f64(in) / 1e9;
        H.lambda = speed_of_light / (H.fc * 1e9);
        for (std::size_t k = 0; k < n; ++k)
        {
            H.delays.push_back(get_f64(in));
            std::vector<cdouble> tap(std::size_t(H.U) * H.S * H.T);
            for (cdouble &x : tap)
            {
                float re = get_f32(in), im = get_f32(in);
                x = cdouble(re, im);
            }
            H.taps.push_back(std::move(tap));
        }
        return H;
    }
}

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

#include "fr3/field.hpp"

#include <Eigen/Dense>
#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace fr3
{
    namespace
    {
        FieldKernel design_kernel(double dcor)
        {
            // Periodic grid large enough that exp(-r/dcor) has decayed well below double precision noise in
            // the wrapped tails
            int P = 64;
            while (P < 16.0 * dcor)
                P *= 2;
            const int Pc = P / 2 + 1;

            double *in = fftw_alloc_real(std::size_t(P) * P);
            fftw_complex *spec = fftw_alloc_complex(std::size_t(P) * Pc);
            fftw_plan fwd = fftw_plan_dft_r2c_2d(P, P, in, spec, FFTW_ESTIMATE);
            fftw_plan inv = fftw_plan_dft_c2r_2d(P, P, spec, in, FFTW_ESTIMATE);

            for (int j = 0; j < P; ++j)
                for (int i = 0; i < P; ++i)
                {
                    double dx = std::min(i, P - i), dy = std::min(j, P - j);
                    in[std::size_t(j) * P + i] = std::exp(-std::hypot(dx, dy) / dcor);
                }
            fftw_execute(fwd);
            // The target autocorrelation is real and even, so its spectrum is real; negative values are
            // numerical noise and are clipped before taking the root.
            for (std::size_t k = 0; k < std::size_t(P) * Pc; ++k)
            {
                spec[k][0] = std::sqrt(std::max(spec[k][0], 0.0));
                spec[k][1] = 0.0;
            }
            fftw_execute(inv);

            FieldKernel K;
            K.dcor = dcor;
            K.radius = int(std::ceil(4.0 * dcor));
            const int R = K.radius, W = 2 * R + 1;
            K.taps.assign(std::size_t(W) * W, 0.0);
            double e = 0.0;
            for (int y = -R; y <= R; ++y)
                for (int x = -R; x <= R; ++x)
                {
                    if (std::hypot(double(x), double(y)) > 4.0 * dcor)
                        continue;
                    double v = in[std::size_t((y + P) % P) * P + std::size_t((x + P) % P)];
                    K.taps[std::size_t(y + R) * W + (x + R)] = v;
                    e += v * v;
                }
            double s = 1.0 / std::sqrt(e);
            for (double &t : K.taps)
                t *= s;

            fftw_destroy_plan(fwd);
            fftw_destroy_plan(inv);
            fftw_free(in);
            fftw_free(spec);
            return K;
        }

        std::uint64_t pack_key(const FieldKey &k)
        {
            return (std::uint64_t(k.site) << 32) | (std::uint64_t(int(k.state)) << 24) | (std::uint64_t(std::uint32_t(k.floor)) & 0xffffffu);
        }

        std::int64_t floordiv(std::int64_t a, std::int64_t b)
        {
            std::int64_t q = a / b;
            if ((a % b != 0) && ((a < 0) != (b < 0)))
                --q;
            return q;
        }
    }

    const FieldKernel &field_kernel(double dcor)
    {
        if (!(dcor > 0.0) || !std::isfinite(dcor))
            throw std::invalid_argument("field_kernel: correlation distance must be positive");
        static std::mutex mtx;
        static std::map<double, std::unique_ptr<FieldKernel>> cache;
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(dcor);
        if (it == cache.end())
            it = cache.emplace(dcor, std::make_unique<FieldKernel>(design_kernel(dcor))).first;
        return *it->second;
    }

    const std::vector<float> &CorrelatedField::noise_tile(const FieldKey &key, int channel, std::int64_t tx, std::int64_t ty)
    {
        TileId id{key.site, int(key.state), key.floor, channel, tx, ty};
        auto it = tiles_.find(id);
        if (it != tiles_.end())
            return it->second;
        std::uint64_t sub = (std::uint64_t(channel) << 56) ^ ((std::uint64_t(tx) & 0xfffffffull) << 28) ^
                            (std::uint64_t(ty) & 0xfffffffull);
        Rng rng(seed_, drop_, pack_key(key), Step::Field, sub);
        std::vector<float> t(std::size_t(tile) * tile);
        for (float &v : t)
            v = float(rng.normal());
        return tiles_.emplace(id, std::move(t)).first->second;
    }

    double CorrelatedField::noise(const FieldKey &key, int channel, std::int64_t cx, std::int64_t cy)
    {
        std::int64_t tx = floordiv(cx, tile), ty = floordiv(cy, tile);
        const auto &t = noise_tile(key, channel, tx, ty);
        return t[std::size_t(cy - ty * tile) * tile + std::size_t(cx - tx * tile)];
    }

    double CorrelatedField::value(const FieldKey &key, int channel, double dcor, double x, double y)
    {
        const FieldKernel &K = field_kernel(dcor);
        const int R = K.radius, W = 2 * R + 1;
        std::int64_t cx = std::int64_t(std::floor(x + 0.5)), cy = std::int64_t(std::floor(y + 0.5));

        // Walk the window tile by tile to avoid a map lookup per tap
        double acc = 0.0;
        std::int64_t x0 = cx - R, x1 = cx + R, y0 = cy - R, y1 = cy + R;
        for (std::int64_t ty = floordiv(y0, tile); ty <= floordiv(y1, tile); ++ty)
            for (std::int64_t tx = floordiv(x0, tile); tx <= floordiv(x1, tile); ++tx)
            {
                const auto &t = noise_tile(key, channel, tx, ty);
                std::int64_t ya = std::max(y0, ty * tile), yb = std::min(y1, ty * tile + tile - 1);
                std::int64_t xa = std::max(x0, tx * tile), xb = std::min(x1, tx * tile + tile - 1);
                for (std::int64_t yy = ya; yy <= yb; ++yy)
                {
                    const float *row = &t[std::size_t(yy - ty * tile) * tile];
                    const double *k = &K.taps[std::size_t(yy - y0) * W];
                    for (std::int64_t xx = xa; xx <= xb; ++xx)
                        acc += k[xx - x0] * row[xx - tx * tile];
                }
            }
        return acc;
    }

    std::vector<double> CorrelatedField::grid(const FieldKey &key, int channel, double dcor, int x0, int y0, int nx, int ny)
    {
        if (nx <= 0 || ny <= 0)
            throw std::invalid_argument("CorrelatedField::grid: empty grid");
        const FieldKernel &K = field_kernel(dcor);
        const int R = K.radius, W = 2 * R + 1;

        // Dense noise patch covering the grid plus the kernel support
        const int px = nx + 2 * R, py = ny + 2 * R;
        std::vector<double> patch(std::size_t(px) * py);
        for (int j = 0; j < py; ++j)
            for (int i = 0; i < px; ++i)
                patch[std::size_t(j) * px + i] = noise(key, channel, std::int64_t(x0) - R + i, std::int64_t(y0) - R + j);

        std::vector<double> out(std::size_t(nx) * ny, 0.0);
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i)
            {
                double acc = 0.0;
                for (int a = 0; a < W; ++a)
                {
                    const double *k = &K.taps[std::size_t(a) * W];
                    const double *p = &patch[std::size_t(j + a) * px + i];
                    for (int b = 0; b < W; ++b)
                        acc += k[b] * p[b];
                }
                out[std::size_t(j) * nx + i] = acc;
            }
        return out;
    }

    CorrMatrix sqrt_correlation(const CorrMatrix &C, const std::array<bool, LSP_COUNT> &active)
    {
        std::vector<int> idx;
        for (int i = 0; i < LSP_COUNT; ++i)
            if (active[i])
                idx.push_back(i);
        const int n = int(idx.size());
        Eigen::MatrixXd M(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                M(i, j) = C[idx[i]][idx[j]];
        if (!M.isApprox(M.transpose(), 1e-12))
            throw std::invalid_argument("sqrt_correlation: matrix is not symmetric");

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
        if (es.info() != Eigen::Success)
            throw std::invalid_argument("sqrt_correlation: eigendecomposition failed");
        Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
        if (ev.maxCoeff() <= 0.0)
            throw std::invalid_argument("sqrt_correlation: matrix has no positive eigenvalue");
        Eigen::MatrixXd B = es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
        for (int i = 0; i < n; ++i)
        {
            double norm = B.row(i).norm();
            if (norm > 0.0)
                B.row(i) /= norm;
        }

        CorrMatrix S{};
        for (int i = 0; i < LSP_COUNT; ++i)
            S[i][i] = 1.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                S[idx[i]][idx[j]] = B(i, j);
        return S;
    }

    std::array<double, LSP_COUNT> correlated_normals(CorrelatedField &f, const ScenarioParams &sc, StateClass s,
                                                     const FieldKey &key, double x, double y, const ExprVars &v)
    {
        std::array<bool, LSP_COUNT> active;
        active.fill(true);
        if (s != StateClass::LOS)
            active[LSP_K] = false;

        std::array<double, LSP_COUNT> xi{};
        for (int c = 0; c < LSP_COUNT; ++c)
            if (active[c])
                xi[c] = f.value(key, c, sc.get(std::string("dcor_") + lsp_name(c), s, v), x, y);

        CorrMatrix S = sqrt_correlation(sc.correlation(s), active);
        std::array<double, LSP_COUNT> out{};
        for (int i = 0; i < LSP_COUNT; ++i)
        {
            if (!active[i])
                continue;
            for (int j = 0; j < LSP_COUNT; ++j)
                if (active[j])
                    out[i] += S[i][j] * xi[j];
        }
        return out;
    }
}

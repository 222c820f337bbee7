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
#include "fr3/config.hpp"
#include "fr3/field.hpp"
#include "fr3/harness.hpp"
#include "fr3/smallscale.hpp"

#include <benchmark/benchmark.h>

using namespace fr3;

namespace
{
    const Registry &registry()
    {
        static const Registry R = load_parameter_tables(FR3SIM_BENCH_DATA_DIR);
        return R;
    }

    SmallScaleInputs sma_like()
    {
        SmallScaleInputs in;
        in.N = 15;
        in.M = 20;
        in.los = true;
        in.lsp.DS = 60e-9;
        in.lsp.ASA = 35.0;
        in.lsp.ASD = 6.0;
        in.lsp.ZSA = 7.0;
        in.lsp.ZSD = 2.0;
        in.lsp.K = 9.0;
        in.r_tau = 2.4;
        in.pol_variability = true;
        return in;
    }
}

static void BM_ClusterSet(benchmark::State &st)
{
    const SmallScaleInputs in = sma_like();
    std::uint64_t link = 0;
    for (auto _ : st)
        benchmark::DoNotOptimize(generate_cluster_set(in, registry().scaling, 1, 0, link++));
}
BENCHMARK(BM_ClusterSet);

static void BM_Synthesize(benchmark::State &st)
{
    const double lambda = speed_of_light / 7e9;
    PanelArray bs;
    bs.M = int(st.range(0));
    bs.N = int(st.range(1));
    bs.P = 2;
    ArrayEndpoint tx = make_panel_endpoint(bs, Vec3(0, 0, 25), Orientation{}, lambda);
    ArrayEndpoint rx = make_device_endpoint(UEDevice::handheld(), ElementPattern::isotropic(), 2, Vec3(100, 0, 1.5),
                                            Orientation{180.0, 0.0, 0.0});
    ClusterSet cs = generate_cluster_set(sma_like(), registry().scaling, 2, 0, 0);
    Rng rp(2, 0, 0, Step::Phase);
    PhaseGrid ph = draw_phases(cs.N, cs.M, rp);
    SynthesisOptions o;
    o.c_DS = 3.68e-9;
    o.d3D = 102.0;
    for (auto _ : st)
        benchmark::DoNotOptimize(synthesize(cs, tx, rx, ph, o));
    st.counters["elements"] = double(tx.size());
}
BENCHMARK(BM_Synthesize)->Args({1, 4})->Args({4, 8})->Args({16, 64})->Unit(benchmark::kMillisecond);

static void BM_FieldValue(benchmark::State &st)
{
    CorrelatedField f(3, 0);
    const double dcor = double(st.range(0));
    double x = 0.0;
    for (auto _ : st)
    {
        benchmark::DoNotOptimize(f.value({0, StateClass::NLOS, 0}, LSP_DS, dcor, x, 0.5 * x));
        x += 7.3;
    }
}
BENCHMARK(BM_FieldValue)->Arg(10)->Arg(50);

static void BM_RunLinks(benchmark::State &st)
{
    RunConfig c = parse_config("[run]\nscenario = SMa\nn_ues = 20\nseed = 9\n[features]\npol_variability = on\n");
    for (auto _ : st)
        benchmark::DoNotOptimize(run_links(c, registry()));
}
BENCHMARK(BM_RunLinks)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

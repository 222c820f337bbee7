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

#include "common.hpp"

#include "fr3/config.hpp"
#include "fr3/harness.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace fr3;
namespace fs = std::filesystem;

TEST_CASE("capacity of simple channels")
{
    Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(2, 2);
    CHECK(capacity(I, 10.0) == doctest::Approx(2.0 * std::log2(6.0)).epsilon(1e-12));

    Eigen::MatrixXcd h(1, 4);
    h << 1.0, std::complex<double>(0, 1), -1.0, 0.5;
    // rank one: log2(1 + snr/S |h|^2)
    CHECK(capacity(h, 0.0) == doctest::Approx(std::log2(1.0 + 3.25 / 4.0)).epsilon(1e-12));
    CHECK(capacity(h.transpose(), 0.0) == doctest::Approx(std::log2(1.0 + 3.25)).epsilon(1e-12));
    CHECK(capacity(Eigen::MatrixXcd::Zero(3, 2), 10.0) == 0.0);

    // capacity grows with SNR
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Random(4, 8);
    double last = -1.0;
    for (double snr = -10.0; snr <= 30.0; snr += 5.0)
    {
        double c = capacity(G, snr);
        CHECK(c > last);
        last = c;
    }
}

TEST_CASE("gini coefficient")
{
    CHECK(gini({1.0, 1.0, 1.0, 1.0}) == doctest::Approx(0.0));
    CHECK(gini({0.0, 0.0, 0.0, 1.0}) == doctest::Approx(0.75));
    CHECK(gini({1.0, 2.0, 3.0}) == doctest::Approx(2.0 / 9.0));
    CHECK(gini({3.0, 1.0, 2.0}) == gini({1.0, 2.0, 3.0}));
    CHECK_THROWS_AS(gini({}), std::invalid_argument);
    CHECK_THROWS_AS(gini({0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(gini({1.0, -1.0}), std::invalid_argument);
}

TEST_CASE("empirical cdf rows")
{
    auto rows = cdf_rows({3.0, 1.0, 2.0, 2.0});
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == std::pair<double, double>{1.0, 0.25});
    CHECK(rows[1] == std::pair<double, double>{2.0, 0.75});
    CHECK(rows[2] == std::pair<double, double>{3.0, 1.0});
    CHECK_THROWS_AS(cdf_rows({}), std::invalid_argument);
}

TEST_CASE("sha256 of a file")
{
    fs::path p = fs::temp_directory_path() / "fr3sim_sha_test.txt";
    {
        std::ofstream f(p, std::ios::binary);
        f << "abc";
    }
    CHECK(sha256_file(p.string()) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    fs::remove(p);
}

TEST_CASE("links are identical for any worker count")
{
    RunConfig c = parse_config("[run]\nscenario = SMa\nn_ues = 12\nseed = 77\n[features]\npol_variability = on\n"
                               "absolute_delay = on\nsns = stochastic\n");
    c.data_dir = test::data_dir();
    c.workers = 1;
    const std::string ref = links_csv(run_links(c, test::registry()));
    for (int w : {2, 5})
    {
        c.workers = w;
        CHECK(links_csv(run_links(c, test::registry())) == ref);
    }
    c.seed = 78;
    CHECK(links_csv(run_links(c, test::registry())) != ref);
}

TEST_CASE("link reports are sane")
{
    RunConfig c = parse_config("[run]\nscenario = UMi\nn_ues = 20\nseed = 3\n");
    RunResult r = run_links(c, test::registry());
    REQUIRE(r.links.size() == 20);
    CHECK(!r.data_files.empty());
    for (std::size_t i = 0; i < r.links.size(); ++i)
    {
        const LinkReport &l = r.links[i];
        CHECK(l.link == i);
        CHECK(l.d3D >= l.d2D);
        CHECK(l.total_loss == doctest::Approx(l.pl + l.o2i_loss + l.sf));
        CHECK(std::isfinite(l.coupling_loss));
        CHECK(l.capacity >= 0.0);
        CHECK(l.n_clusters >= 1);
        CHECK(l.gini >= 0.0);
        CHECK(l.gini <= 1.0);
        CHECK(l.ds >= 0.0);
    }
}

TEST_CASE("run writes its outputs")
{
    fs::path out = fs::temp_directory_path() / "fr3sim_run_test";
    fs::remove_all(out);
    RunConfig c = parse_config("[run]\nscenario = InH\nn_ues = 6\nseed = 4\n");
    c.out_dir = out.string();
    c.data_dir = test::data_dir();
    RunResult r = run(c);
    CHECK(r.links.size() == 6);
    CHECK(fs::exists(out / "links.csv"));
    CHECK(fs::exists(out / "manifest.txt"));
    std::ifstream f(out / "links.csv");
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str() == links_csv(r));
    fs::remove_all(out);

    c.scenario = "Atlantis";
    CHECK_THROWS_AS(run(c), DataError);
}

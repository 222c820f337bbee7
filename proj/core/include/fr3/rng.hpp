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

#ifndef FR3_RNG_HPP
#define FR3_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace fr3
{
    // Module / step identifiers used when deriving substreams. The numeric values are part of the
    // reproducibility contract: changing them changes every seeded output.
    enum class Step : std::uint32_t
    {
        Layout = 1,
        Drop = 2,
        State = 3,
        Field = 4,
        ClusterCount = 5,
        Delay = 6,
        Power = 7,
        Angle = 8,
        Coupling = 9,
        Xpr = 10,
        Polarization = 11,
        Phase = 12,
        AbsDelay = 13,
        NearField = 14,
        Sns = 15,
        UeSns = 16,
        Mobility = 17,
        Test = 99
    };

    // A reproducible random substream
    class Rng
    {
    public:
        explicit Rng(std::uint64_t seed);
        Rng(std::uint64_t master, std::uint64_t drop, std::uint64_t link, Step step, std::uint64_t sub = 0);

        double uniform();                  // (0,1), never returns 0 or 1
        double uniform(double a, double b); // (a,b)
        double normal();                   // N(0,1)
        double normal(double mu, double sigma);
        double gamma(double shape);
        double beta(double a, double b);
        int uniform_int(int lo, int hi); // inclusive
        bool bernoulli(double p);
        std::size_t categorical(const std::vector<double> &weights);

        // Fisher-Yates shuffle driven by this stream
        template <typename T>
        void shuffle(std::vector<T> &v)
        {
            for (std::size_t i = v.size(); i > 1; --i)
            {
                std::size_t j = std::size_t(uniform_int(0, int(i - 1)));
                std::swap(v[i - 1], v[j]);
            }
        }

        std::mt19937_64 &engine() { return eng_; }

    private:
        std::mt19937_64 eng_;
        std::normal_distribution<double> norm_{0.0, 1.0};
    };
}

#endif

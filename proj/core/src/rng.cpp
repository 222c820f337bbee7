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

#include "fr3/rng.hpp"

#include <stdexcept>

namespace fr3
{
    namespace
    {
        std::mt19937_64 seeded(std::initializer_list<std::uint32_t> words)
        {
            std::seed_seq seq(words);
            return std::mt19937_64(seq);
        }
        std::uint32_t lo(std::uint64_t x) { return std::uint32_t(x & 0xffffffffu); }
        std::uint32_t hi(std::uint64_t x) { return std::uint32_t(x >> 32); }
    }

    Rng::Rng(std::uint64_t seed) : eng_(seeded({lo(seed), hi(seed)})) {}

    Rng::Rng(std::uint64_t master, std::uint64_t drop, std::uint64_t link, Step step, std::uint64_t sub)
        : eng_(seeded({lo(master), hi(master), lo(drop), hi(drop), lo(link), hi(link),
                       std::uint32_t(step), lo(sub), hi(sub), 0x46523353u}))
    {
    }

    double Rng::uniform()
    {
        // 53-bit mantissa, reject exact zero
        for (;;)
        {
            double u = double(eng_() >> 11) * 0x1.0p-53;
            if (u > 0.0)
                return u;
        }
    }

    double Rng::uniform(double a, double b) { return a + (b - a) * uniform(); }

    double Rng::normal() { return norm_(eng_); }

    double Rng::normal(double mu, double sigma) { return mu + sigma * norm_(eng_); }

    double Rng::gamma(double shape)
    {
        if (!(shape > 0.0))
            throw std::invalid_argument("gamma: shape must be positive");
        std::gamma_distribution<double> g(shape, 1.0);
        return g(eng_);
    }

    double Rng::beta(double a, double b)
    {
        if (!(a > 0.0) || !(b > 0.0))
            throw std::invalid_argument("beta: parameters must be positive");
        double x = gamma(a), y = gamma(b);
        return x / (x + y);
    }

    int Rng::uniform_int(int lo_, int hi_)
    {
        if (hi_ < lo_)
            throw std::invalid_argument("uniform_int: empty range");
        std::uniform_int_distribution<int> d(lo_, hi_);
        return d(eng_);
    }

    bool Rng::bernoulli(double p) { return uniform() < p; }

    std::size_t Rng::categorical(const std::vector<double> &weights)
    {
        double total = 0.0;
        for (double w : weights)
        {
            if (w < 0.0)
                throw std::invalid_argument("categorical: negative weight");
            total += w;
        }
        if (!(total > 0.0))
            throw std::invalid_argument("categorical: weights sum to zero");
        double u = uniform() * total, acc = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i)
        {
            acc += weights[i];
            if (u < acc)
                return i;
        }
        return weights.size() - 1;
    }
}

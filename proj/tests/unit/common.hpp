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

#ifndef FR3SIM_TEST_COMMON_HPP
#define FR3SIM_TEST_COMMON_HPP

#include "fr3/scenario.hpp"

#include <cmath>
#include <string>

namespace fr3::test
{
    inline std::string data_dir() { return FR3SIM_TEST_DATA_DIR; }
    inline std::string config_dir() { return FR3SIM_TEST_CONFIG_DIR; }

    inline const Registry &registry()
    {
        static const Registry R = load_parameter_tables(data_dir());
        return R;
    }

    inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }
    inline bool near_rel(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)); }
}

#endif

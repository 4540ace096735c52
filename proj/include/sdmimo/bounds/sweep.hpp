// SPDX-License-Identifier: Apache-2.0
//
// sdmimo - rate bounds and simulation for successive decoding over MIMO channels without CSI
// Copyright (C) 2026 The sdmimo authors
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

#ifndef SDMIMO_BOUNDS_SWEEP_HPP
#define SDMIMO_BOUNDS_SWEEP_HPP

#include "sdmimo/bounds/bounds.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace sdmimo::bounds
{
    using Cell = std::variant<double, std::int64_t, std::string>;

    struct Table
    {
        std::vector<std::string> columns;
        std::vector<std::vector<Cell>> rows;
    };

    // Cartesian product beta x snr x sigma_theta2, one row per (point, series).
    // Series are the signaling families (promoted to their biased variant when
    // sigma_theta2 > 0) followed by "hh" when requested.
    struct SweepPlan
    {
        double alpha = 1.0;
        double tau0 = 0.0;
        double P = 1.0;
        std::vector<double> betas{0.5};
        std::vector<double> snr_db{6.0};
        std::vector<double> sigma_theta2{0.0};
        std::vector<core::Family> families{core::Family::GaussianUnbiased};
        core::Hyperprior hyperprior = core::Hyperprior::TwoPointReal;
        bool include_hh = false;
        HhOptions hh{};
        QuadratureConfig quad{};
        RateOptions rate{};
    };

    Table sweep(const SweepPlan &plan);
}

#endif

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

#include "sdmimo/kernels/logistic.hpp"

#include <cmath>

namespace sdmimo::kernels::scalar
{
    namespace
    {
        // Both functions share t = e^{-2|u|} in (0, 1].
        inline void accumulate(double u, double w, LogisticSums &acc)
        {
            const double t = std::exp(-2.0 * std::fabs(u));
            const double inv = 1.0 / (1.0 + t);
            const double tail = u >= 0.0 ? 2.0 * t * inv : 2.0 * inv;
            const double sp = (u < 0.0 ? -2.0 * u : 0.0) + std::log1p(t);
            acc.tail += w * tail;
            acc.softplus += w * sp;
        }
    }

    LogisticSums logistic_sums_affine(const double *z, const double *w, std::size_t n,
                                      double shift, double scale)
    {
        LogisticSums acc;
        for (std::size_t i = 0; i < n; ++i)
            accumulate(shift + scale * z[i], w[i], acc);
        return acc;
    }

    LogisticSums logistic_sums_gauss(const double *u, const double *w, std::size_t n,
                                     double center, double inv_two_var)
    {
        LogisticSums acc;
        for (std::size_t i = 0; i < n; ++i)
        {
            const double d = u[i] - center;
            accumulate(u[i], w[i] * std::exp(-d * d * inv_two_var), acc);
        }
        return acc;
    }
}

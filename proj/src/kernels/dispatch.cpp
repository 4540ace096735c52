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

#include <cstdlib>
#include <cstring>

namespace sdmimo::kernels
{
    namespace
    {
        bool force_scalar()
        {
            const char *env = std::getenv("SDMIMO_FORCE_SCALAR");
            return env != nullptr && std::strcmp(env, "") != 0 && std::strcmp(env, "0") != 0;
        }

        Isa detect()
        {
#if defined(SDMIMO_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
            if (!force_scalar() && avx2_available())
                return Isa::Avx2;
#endif
            return Isa::Scalar;
        }
    }

    std::string_view to_string(Isa isa)
    {
        return isa == Isa::Avx2 ? "avx2" : "scalar";
    }

    bool avx2_available()
    {
#if defined(SDMIMO_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
        static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
        return ok;
#else
        return false;
#endif
    }

    Isa active_isa()
    {
        static const Isa isa = detect();
        return isa;
    }

    LogisticSums logistic_sums_affine(std::span<const double> z, std::span<const double> w,
                                      double shift, double scale)
    {
        const std::size_t n = z.size() < w.size() ? z.size() : w.size();
#ifdef SDMIMO_HAVE_AVX2
        if (active_isa() == Isa::Avx2)
            return avx2::logistic_sums_affine(z.data(), w.data(), n, shift, scale);
#endif
        return scalar::logistic_sums_affine(z.data(), w.data(), n, shift, scale);
    }

    LogisticSums logistic_sums_gauss(std::span<const double> u, std::span<const double> w,
                                     double center, double inv_two_var)
    {
        const std::size_t n = u.size() < w.size() ? u.size() : w.size();
#ifdef SDMIMO_HAVE_AVX2
        if (active_isa() == Isa::Avx2)
            return avx2::logistic_sums_gauss(u.data(), w.data(), n, center, inv_two_var);
#endif
        return scalar::logistic_sums_gauss(u.data(), w.data(), n, center, inv_two_var);
    }
}

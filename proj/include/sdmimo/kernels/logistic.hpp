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

#ifndef SDMIMO_KERNELS_LOGISTIC_HPP
#define SDMIMO_KERNELS_LOGISTIC_HPP

// Weighted sums of the two logistic functions that appear in every
// binary-input AWGN expectation:
//
//   tail(u)     = 1 - tanh(u)        = 2 / (1 + e^{2u})
//   softplus(u) = ln(1 + e^{-2u})
//
// evaluated on a node set. These sums are the inner loop of the QPSK
// fixed-point scan, so each has a scalar reference and an AVX2/FMA variant;
// the public entry points dispatch on the CPU at first use.

#include <cstddef>
#include <span>
#include <string_view>

namespace sdmimo::kernels
{
    struct LogisticSums
    {
        double tail = 0.0;     // sum_i w_i (1 - tanh u_i)
        double softplus = 0.0; // sum_i w_i ln(1 + e^{-2 u_i})
    };

    enum class Isa
    {
        Scalar,
        Avx2
    };

    std::string_view to_string(Isa isa);

    // u_i = shift + scale * z_i, weights used as given.
    LogisticSums logistic_sums_affine(std::span<const double> z, std::span<const double> w,
                                      double shift, double scale);

    // u_i given directly, weights multiplied by exp(-(u_i - center)^2 * inv_two_var).
    LogisticSums logistic_sums_gauss(std::span<const double> u, std::span<const double> w,
                                     double center, double inv_two_var);

    // ISA picked by the dispatcher (AVX2 when the CPU reports avx2+fma and the
    // variant was compiled in; SDMIMO_FORCE_SCALAR=1 in the environment disables it).
    Isa active_isa();
    bool avx2_available();

    namespace scalar
    {
        LogisticSums logistic_sums_affine(const double *z, const double *w, std::size_t n,
                                          double shift, double scale);
        LogisticSums logistic_sums_gauss(const double *u, const double *w, std::size_t n,
                                         double center, double inv_two_var);
    }

    namespace avx2
    {
        // Only callable when avx2_available() is true.
        LogisticSums logistic_sums_affine(const double *z, const double *w, std::size_t n,
                                          double shift, double scale);
        LogisticSums logistic_sums_gauss(const double *u, const double *w, std::size_t n,
                                         double center, double inv_two_var);

        // Vector math building blocks, exposed for the equivalence tests.
        void exp_neg(const double *x, double *out, std::size_t n);   // e^x for x <= 0
        void log1p_unit(const double *t, double *out, std::size_t n); // ln(1+t) for t in [0,1]
    }
}

#endif

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

// This translation unit is compiled with -mavx2 -mfma. Nothing here may be
// called unless avx2_available() returned true.

#include "sdmimo/kernels/logistic.hpp"

#include <immintrin.h>

namespace sdmimo::kernels::avx2
{
    namespace
    {
        // Cephes-style exp(x) on x <= 0; lanes below -708 flush to zero.
        inline __m256d exp_neg_pd(__m256d x)
        {
            const __m256d lo = _mm256_set1_pd(-708.0);
            const __m256d under = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
            x = _mm256_max_pd(x, lo);

            const __m256d fx = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(1.4426950408889634073599)),
                                               _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
            x = _mm256_fnmadd_pd(fx, _mm256_set1_pd(6.93145751953125E-1), x);
            x = _mm256_fnmadd_pd(fx, _mm256_set1_pd(1.42860682030941723212E-6), x);

            const __m256d xx = _mm256_mul_pd(x, x);
            __m256d px = _mm256_fmadd_pd(_mm256_set1_pd(1.26177193074810590878E-4), xx,
                                         _mm256_set1_pd(3.02994407707441961300E-2));
            px = _mm256_fmadd_pd(px, xx, _mm256_set1_pd(9.99999999999999999910E-1));
            px = _mm256_mul_pd(px, x);

            __m256d qx = _mm256_fmadd_pd(_mm256_set1_pd(3.00198505138664455042E-6), xx,
                                         _mm256_set1_pd(2.52448340349684104192E-3));
            qx = _mm256_fmadd_pd(qx, xx, _mm256_set1_pd(2.27265548208155028766E-1));
            qx = _mm256_fmadd_pd(qx, xx, _mm256_set1_pd(2.00000000000000000009E0));

            __m256d e = _mm256_div_pd(px, _mm256_sub_pd(qx, px));
            e = _mm256_fmadd_pd(_mm256_set1_pd(2.0), e, _mm256_set1_pd(1.0));

            // 2^fx with fx in [-1021, 0]
            __m256i n = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(fx));
            n = _mm256_slli_epi64(_mm256_add_epi64(n, _mm256_set1_epi64x(1023)), 52);
            const __m256d r = _mm256_mul_pd(e, _mm256_castsi256_pd(n));
            return _mm256_andnot_pd(under, r);
        }

        // ln(1 + t) for t in [0, 1], with the rounding error of 1 + t folded back in.
        inline __m256d log1p_unit_pd(__m256d t)
        {
            const __m256d one = _mm256_set1_pd(1.0);
            const __m256d y = _mm256_add_pd(one, t);
            const __m256d corr = _mm256_div_pd(_mm256_sub_pd(t, _mm256_sub_pd(y, one)), y);

            const __m256d big = _mm256_cmp_pd(y, _mm256_set1_pd(1.4142135623730950488), _CMP_GT_OQ);
            const __m256d ex = _mm256_and_pd(big, one);
            const __m256d f = _mm256_blendv_pd(y, _mm256_mul_pd(y, _mm256_set1_pd(0.5)), big);
            const __m256d x = _mm256_sub_pd(f, one);
            const __m256d z = _mm256_mul_pd(x, x);

            __m256d p = _mm256_fmadd_pd(_mm256_set1_pd(1.01875663804580931796E-4), x,
                                        _mm256_set1_pd(4.97494994976747001425E-1));
            p = _mm256_fmadd_pd(p, x, _mm256_set1_pd(4.70579119878881725854E0));
            p = _mm256_fmadd_pd(p, x, _mm256_set1_pd(1.44989225341610930846E1));
            p = _mm256_fmadd_pd(p, x, _mm256_set1_pd(1.79368678507819816313E1));
            p = _mm256_fmadd_pd(p, x, _mm256_set1_pd(7.70838733755885391666E0));

            __m256d q = _mm256_add_pd(x, _mm256_set1_pd(1.12873587189167450590E1));
            q = _mm256_fmadd_pd(q, x, _mm256_set1_pd(4.52279145837532221105E1));
            q = _mm256_fmadd_pd(q, x, _mm256_set1_pd(8.29875266912776603211E1));
            q = _mm256_fmadd_pd(q, x, _mm256_set1_pd(7.11544750618563894466E1));
            q = _mm256_fmadd_pd(q, x, _mm256_set1_pd(2.31251620126765340583E1));

            __m256d r = _mm256_mul_pd(x, _mm256_div_pd(_mm256_mul_pd(z, p), q));
            r = _mm256_fnmadd_pd(ex, _mm256_set1_pd(2.121944400546905827679e-4), r);
            r = _mm256_fnmadd_pd(_mm256_set1_pd(0.5), z, r);
            r = _mm256_add_pd(x, r);
            r = _mm256_fmadd_pd(ex, _mm256_set1_pd(0.693359375), r);
            return _mm256_add_pd(r, corr);
        }

        inline double hsum(__m256d v)
        {
            const __m128d lo = _mm256_castpd256_pd128(v);
            const __m128d hi = _mm256_extractf128_pd(v, 1);
            const __m128d s = _mm_add_pd(lo, hi);
            return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
        }

        inline void accumulate(__m256d u, __m256d w, __m256d &tail_acc, __m256d &sp_acc)
        {
            const __m256d one = _mm256_set1_pd(1.0);
            const __m256d two = _mm256_set1_pd(2.0);
            const __m256d sign_mask = _mm256_set1_pd(-0.0);
            const __m256d absu = _mm256_andnot_pd(sign_mask, u);
            const __m256d t = exp_neg_pd(_mm256_mul_pd(_mm256_set1_pd(-2.0), absu));
            const __m256d inv = _mm256_div_pd(one, _mm256_add_pd(one, t));

            const __m256d neg = _mm256_cmp_pd(u, _mm256_setzero_pd(), _CMP_LT_OQ);
            const __m256d tail = _mm256_mul_pd(two, _mm256_blendv_pd(_mm256_mul_pd(t, inv), inv, neg));
            const __m256d lin = _mm256_and_pd(neg, _mm256_mul_pd(_mm256_set1_pd(-2.0), u));
            const __m256d sp = _mm256_add_pd(lin, log1p_unit_pd(t));

            tail_acc = _mm256_fmadd_pd(w, tail, tail_acc);
            sp_acc = _mm256_fmadd_pd(w, sp, sp_acc);
        }
    }

    LogisticSums logistic_sums_affine(const double *z, const double *w, std::size_t n,
                                      double shift, double scale)
    {
        const __m256d vshift = _mm256_set1_pd(shift);
        const __m256d vscale = _mm256_set1_pd(scale);
        __m256d tail = _mm256_setzero_pd();
        __m256d sp = _mm256_setzero_pd();

        std::size_t i = 0;
        for (; i + 4 <= n; i += 4)
        {
            const __m256d u = _mm256_fmadd_pd(vscale, _mm256_loadu_pd(z + i), vshift);
            accumulate(u, _mm256_loadu_pd(w + i), tail, sp);
        }
        if (i < n)
        {
            alignas(32) double zb[4] = {0.0, 0.0, 0.0, 0.0};
            alignas(32) double wb[4] = {0.0, 0.0, 0.0, 0.0};
            for (std::size_t k = 0; i + k < n; ++k)
            {
                zb[k] = z[i + k];
                wb[k] = w[i + k];
            }
            const __m256d u = _mm256_fmadd_pd(vscale, _mm256_load_pd(zb), vshift);
            accumulate(u, _mm256_load_pd(wb), tail, sp);
        }
        return {hsum(tail), hsum(sp)};
    }

    LogisticSums logistic_sums_gauss(const double *u, const double *w, std::size_t n,
                                     double center, double inv_two_var)
    {
        const __m256d vc = _mm256_set1_pd(center);
        const __m256d vk = _mm256_set1_pd(-inv_two_var);
        __m256d tail = _mm256_setzero_pd();
        __m256d sp = _mm256_setzero_pd();

        auto step = [&](__m256d uu, __m256d ww)
        {
            const __m256d d = _mm256_sub_pd(uu, vc);
            const __m256d g = exp_neg_pd(_mm256_mul_pd(vk, _mm256_mul_pd(d, d)));
            accumulate(uu, _mm256_mul_pd(ww, g), tail, sp);
        };

        std::size_t i = 0;
        for (; i + 4 <= n; i += 4)
            step(_mm256_loadu_pd(u + i), _mm256_loadu_pd(w + i));
        if (i < n)
        {
            alignas(32) double ub[4] = {center, center, center, center};
            alignas(32) double wb[4] = {0.0, 0.0, 0.0, 0.0};
            for (std::size_t k = 0; i + k < n; ++k)
            {
                ub[k] = u[i + k];
                wb[k] = w[i + k];
            }
            step(_mm256_load_pd(ub), _mm256_load_pd(wb));
        }
        return {hsum(tail), hsum(sp)};
    }

    void exp_neg(const double *x, double *out, std::size_t n)
    {
        std::size_t i = 0;
        for (; i + 4 <= n; i += 4)
            _mm256_storeu_pd(out + i, exp_neg_pd(_mm256_loadu_pd(x + i)));
        for (; i < n; ++i)
        {
            alignas(32) double b[4] = {x[i], 0.0, 0.0, 0.0};
            alignas(32) double r[4];
            _mm256_store_pd(r, exp_neg_pd(_mm256_load_pd(b)));
            out[i] = r[0];
        }
    }

    void log1p_unit(const double *t, double *out, std::size_t n)
    {
        std::size_t i = 0;
        for (; i + 4 <= n; i += 4)
            _mm256_storeu_pd(out + i, log1p_unit_pd(_mm256_loadu_pd(t + i)));
        for (; i < n; ++i)
        {
            alignas(32) double b[4] = {t[i], 0.0, 0.0, 0.0};
            alignas(32) double r[4];
            _mm256_store_pd(r, log1p_unit_pd(_mm256_load_pd(b)));
            out[i] = r[0];
        }
    }
}

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

#include "sdmimo/bounds/sweep.hpp"

#include <cmath>
#include <cstdio>

namespace sdmimo::bounds
{
    namespace
    {
        core::Family promote(core::Family f, double s2)
        {
            if (s2 <= 0.0)
                return f;
            if (f == core::Family::GaussianUnbiased)
                return core::Family::GaussianBiased;
            if (f == core::Family::QpskUnbiased)
                return core::Family::QpskBiased;
            return f;
        }

        std::string fmt(double x)
        {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.6g", x);
            return buf;
        }
    }

    Table sweep(const SweepPlan &plan)
    {
        Table t;
        t.columns = {"beta", "snr_db", "sigma_theta2", "series", "rate_bits"};
        for (double beta : plan.betas)
            for (double snr : plan.snr_db)
                for (double s2 : plan.sigma_theta2)
                {
                    const Geometry g{plan.alpha, beta, plan.tau0};
                    const double N0 = plan.P / std::pow(10.0, snr / 10.0);
                    try
                    {
                        for (core::Family f : plan.families)
                        {
                            const Signaling sig{promote(f, s2), plan.P, s2, plan.hyperprior};
                            const double r = achievable_rate(g, sig, N0, plan.quad, plan.rate).rate_bits_per_tx;
                            t.rows.push_back({beta, snr, s2, std::string(core::to_string(sig.family)), r});
                        }
                        if (plan.include_hh)
                            t.rows.push_back({beta, snr, s2, std::string("hh"), hh_bound(g, plan.P, N0, plan.hh)});
                    }
                    catch (const Error &e)
                    {
                        throw Error(e.kind(), e.detail() + " [row beta=" + fmt(beta) + " snr_db=" + fmt(snr) +
                                                  " sigma_theta2=" + fmt(s2) + "]");
                    }
                }
        return t;
    }
}

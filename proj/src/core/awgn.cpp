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

#include "sdmimo/core/awgn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sdmimo::core
{
    void validate(const Signaling &sig, const AwgnChannelSpec &ch)
    {
        require(std::isfinite(ch.gain) && ch.gain >= 0.0, ErrorKind::InvalidDomain, "channel gain must be >= 0");
        require(std::isfinite(ch.noise_var) && ch.noise_var > 0.0, ErrorKind::InvalidDomain,
                "noise variance must be > 0");
        const double t2 = std::norm(ch.theta);
        require(t2 < sig.P || (t2 == 0.0 && sig.P == 0.0), ErrorKind::InvalidDomain, "|theta|^2 must be below P");
        if (is_qpsk(sig.family))
        {
            const double amp = std::sqrt(0.5 * sig.P);
            require(std::fabs(ch.theta.real()) <= amp && std::fabs(ch.theta.imag()) <= amp,
                    ErrorKind::InvalidDomain, "QPSK bias must lie inside the constellation square");
        }
    }

    BinaryDim binary_dim(double amp, double theta_r, double gamma, const LlrIntegrator &integ)
    {
        const double pi_plus = 0.5 * (1.0 + theta_r / amp);
        const double pi_minus = 1.0 - pi_plus;
        if (pi_plus <= 0.0 || pi_minus <= 0.0)
            return {};

        // prior log-odds / 2
        const double lam = 0.5 * (std::log(pi_plus) - std::log(pi_minus));
        const double hb = -pi_plus * std::log(pi_plus) - pi_minus * std::log(pi_minus);

        // s U ~ N(gamma + s lam, gamma) given symbol sign s
        const kernels::LogisticSums up = integ.expect(gamma + lam, gamma);
        const kernels::LogisticSums dn = integ.expect(gamma - lam, gamma);

        BinaryDim r;
        r.mmse = amp * amp * (pi_plus * up.tail + pi_minus * dn.tail);
        r.mi_nats = hb - (pi_plus * up.softplus + pi_minus * dn.softplus);
        r.mmse = std::clamp(r.mmse, 0.0, amp * amp - theta_r * theta_r);
        r.mi_nats = std::clamp(r.mi_nats, 0.0, hb);
        return r;
    }

    AwgnMeasures awgn_measures(const Signaling &sig, const AwgnChannelSpec &ch, const LlrIntegrator &integ)
    {
        validate(sig, ch);
        const double var = sig.P - std::norm(ch.theta);
        const double g2 = ch.gain * ch.gain;

        if (is_gaussian(sig.family))
        {
            AwgnMeasures r;
            r.mmse = var * ch.noise_var / (g2 * var + ch.noise_var);
            r.mi_bits = std::log2(1.0 + g2 * var / ch.noise_var);
            return r;
        }

        const double amp = std::sqrt(0.5 * sig.P);
        const double gamma = g2 * sig.P / ch.noise_var;
        const BinaryDim re = binary_dim(amp, ch.theta.real(), gamma, integ);
        const BinaryDim im = ch.theta.imag() == ch.theta.real() ? re : binary_dim(amp, ch.theta.imag(), gamma, integ);
        return {re.mmse + im.mmse, (re.mi_nats + im.mi_nats) * std::numbers::log2e};
    }

    double awgn_mmse(const Signaling &sig, const AwgnChannelSpec &ch, const LlrIntegrator &integ)
    {
        return awgn_measures(sig, ch, integ).mmse;
    }

    double awgn_mutual_info(const Signaling &sig, const AwgnChannelSpec &ch, const LlrIntegrator &integ)
    {
        return awgn_measures(sig, ch, integ).mi_bits;
    }

    double kl_gauss(double var1, double var2)
    {
        require(var1 > 0.0 && var2 > 0.0 && std::isfinite(var1) && std::isfinite(var2), ErrorKind::InvalidDomain,
                "kl_gauss needs positive variances");
        return std::log2(var2 / var1) + (var1 / var2 - 1.0) * std::numbers::log2e;
    }
}

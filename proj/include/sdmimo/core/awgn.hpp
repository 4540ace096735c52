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

#ifndef SDMIMO_CORE_AWGN_HPP
#define SDMIMO_CORE_AWGN_HPP

// Scalar channel z = a x + w, w ~ CN(0, sigma^2), x drawn from the signaling
// prior conditioned on its bias theta.

#include "sdmimo/core/quadrature.hpp"
#include "sdmimo/core/signaling.hpp"

#include <complex>

namespace sdmimo::core
{
    struct AwgnChannelSpec
    {
        double gain = 0.0;      // a = sqrt((1 - xi^2) / alpha)
        double noise_var = 1.0; // sigma^2
        std::complex<double> theta{0.0, 0.0};
    };

    void validate(const Signaling &sig, const AwgnChannelSpec &ch);

    struct AwgnMeasures
    {
        double mmse = 0.0;    // E|x - E[x|z,theta]|^2
        double mi_bits = 0.0; // I(x; z | theta)
    };

    AwgnMeasures awgn_measures(const Signaling &sig, const AwgnChannelSpec &ch,
                               const LlrIntegrator &integ = LlrIntegrator::standard());

    double awgn_mmse(const Signaling &sig, const AwgnChannelSpec &ch,
                     const LlrIntegrator &integ = LlrIntegrator::standard());

    double awgn_mutual_info(const Signaling &sig, const AwgnChannelSpec &ch,
                            const LlrIntegrator &integ = LlrIntegrator::standard());

    // One real dimension of QPSK: symbol +-amp with mean theta_r, observed at
    // snr gamma = a^2 P / sigma^2 (the same for both dimensions).
    struct BinaryDim
    {
        double mmse = 0.0;
        double mi_nats = 0.0;
    };

    BinaryDim binary_dim(double amp, double theta_r, double gamma, const LlrIntegrator &integ);

    // D(CN(0,v1) || CN(0,v2)) in bits.
    double kl_gauss(double var1, double var2);
}

#endif

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

#ifndef SDMIMO_BOUNDS_BOUNDS_HPP
#define SDMIMO_BOUNDS_BOUNDS_HPP

// Rates are in bits per channel use per transmit antenna throughout.

#include "sdmimo/replica/solver.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace sdmimo::bounds
{
    using core::QuadratureConfig;
    using core::Signaling;
    using replica::Geometry;

    struct IntegrandSample
    {
        double tau, mu, xi2, sigma2, integrand;
    };

    struct RateOptions
    {
        bool keep_samples = false;
        bool perfect_csi = false; // force xi2 = 0 (ceiling)
        replica::DetectorOptions detector{};
        unsigned threads = 0;     // 0: SDMIMO_THREADS or hardware concurrency
    };

    struct RateBound
    {
        double rate_bits_per_tx = 0.0;
        int tau_nodes = 0; // total over all tau panels
        int mu_nodes = 0;
        std::vector<IntegrandSample> integrand_samples;
    };

    // Double integral over tau in [tau0, 1], mu in [0, 1] of the decoupled-channel
    // mutual information. The tau range is split at beta when tau0 < beta < 1,
    // where xi2(tau) has a kink.
    RateBound achievable_rate(const Geometry &geom, const Signaling &sig, double N0,
                              const QuadratureConfig &quad = {}, const RateOptions &opt = {});

    // (1 - tau0) log2(1 + P / (alpha N0)) for Gaussian, 2 (1 - tau0) for QPSK.
    double rate_ceiling(const Geometry &geom, const Signaling &sig, double N0);

    // Large-system spectral efficiency (1/N) log2 det(I + (x/M) H H^H) for M/N -> z.
    double c_rm(double z, double x);

    enum class HhPower
    {
        Optimized, // training/data power split optimized, per-block energy constraint
        Equal      // pilots and data at power P
    };

    struct HhOptions
    {
        std::optional<double> tau0; // default beta (T_tr = M)
        HhPower power = HhPower::Optimized;
    };

    double hh_bound(const Geometry &geom, double P, double N0, const HhOptions &opt = {});

    struct LowSnrPoint
    {
        double s = 0.0;        // P / (beta N0)
        double rate_R = 0.0;   // bits
        double eb_n0_db = 0.0; // 10 log10(beta s / (alpha R))
    };

    // R(s) in bits for ratio k = beta / alpha; a series is used for small s.
    double low_snr_rate(double beta_over_alpha, double s);

    struct LowSnrCurve
    {
        std::vector<LowSnrPoint> points;
        std::size_t argmin = 0; // index of the minimum Eb/N0
    };

    LowSnrCurve low_snr_curve(double beta_over_alpha, const std::vector<double> &s_grid);

    // Finite-difference slope d c / d log2(P/N0) between two SNRs (dB), P taken from sig.
    double multiplexing_gain(const Geometry &geom, const Signaling &sig,
                             std::pair<double, double> snr_db = {40.0, 60.0}, const QuadratureConfig &quad = {});

    // Horizontal distance in dB between two increasing rate-vs-SNR curves at a
    // given rate level, read by monotone cubic interpolation of SNR(rate).
    double monotone_cubic_eval(const std::vector<double> &x, const std::vector<double> &y, double xq);
}

#endif

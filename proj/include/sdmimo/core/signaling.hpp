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

#ifndef SDMIMO_CORE_SIGNALING_HPP
#define SDMIMO_CORE_SIGNALING_HPP

#include "sdmimo/core/error.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <string_view>

namespace sdmimo::core
{
    enum class Family
    {
        GaussianUnbiased,
        GaussianBiased,
        QpskUnbiased,
        QpskBiased
    };

    // Distribution of the per-symbol bias theta.
    //   TwoPointReal:   theta = +-sigma_theta, equiprobable, real
    //   FixedMagnitude: |theta|^2 = sigma_theta^2, phase irrelevant for the caller
    enum class Hyperprior
    {
        TwoPointReal,
        FixedMagnitude
    };

    std::string_view to_string(Family f);
    std::string_view to_string(Hyperprior h);

    constexpr bool is_gaussian(Family f) { return f == Family::GaussianUnbiased || f == Family::GaussianBiased; }
    constexpr bool is_qpsk(Family f) { return !is_gaussian(f); }
    constexpr bool is_biased(Family f) { return f == Family::GaussianBiased || f == Family::QpskBiased; }

    struct Signaling
    {
        Family family = Family::GaussianUnbiased;
        double P = 1.0;            // symbol energy
        double sigma_theta2 = 0.0; // bias variance, zero for unbiased families
        Hyperprior hyperprior = Hyperprior::TwoPointReal;
    };

    // Throws InvalidDomain on violation. allow_zero_power is for degenerate tests only.
    void validate(const Signaling &sig, bool allow_zero_power = false);

    // Unbiased families ignore sigma_theta2 entirely.
    inline double effective_sigma_theta2(const Signaling &sig)
    {
        return is_biased(sig.family) ? sig.sigma_theta2 : 0.0;
    }

    enum class ThetaDependence
    {
        MagnitudeOnly, // f(theta) depends on |theta|^2 alone
        Full
    };

    struct BiasAtom
    {
        std::complex<double> theta;
        double weight;
    };

    struct BiasAtoms
    {
        std::array<BiasAtom, 2> atom{};
        int count = 0;
    };

    BiasAtoms bias_atoms(const Signaling &sig, ThetaDependence dep);

    // E_theta[f(theta)] under the signaling's hyperprior.
    template <class F>
    double hyperprior_expect(const Signaling &sig, F &&f, ThetaDependence dep = ThetaDependence::Full)
    {
        const BiasAtoms a = bias_atoms(sig, dep);
        double acc = 0.0;
        for (int i = 0; i < a.count; ++i)
            acc += a.atom[i].weight * static_cast<double>(f(a.atom[i].theta));
        return acc;
    }
}

#endif

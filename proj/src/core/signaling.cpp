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

#include "sdmimo/core/signaling.hpp"

#include <string>

namespace sdmimo
{
    std::string_view to_string(ErrorKind kind)
    {
        switch (kind)
        {
        case ErrorKind::InvalidDomain:
            return "invalid-domain";
        case ErrorKind::InvalidConfig:
            return "invalid-config";
        case ErrorKind::NonConvergence:
            return "non-convergence";
        case ErrorKind::BracketFailure:
            return "bracket-failure";
        case ErrorKind::NoSolution:
            return "no-solution";
        case ErrorKind::UnsupportedHyperprior:
            return "unsupported-hyperprior";
        case ErrorKind::Singular:
            return "singular";
        }
        return "unknown";
    }
}

namespace sdmimo::core
{
    std::string_view to_string(Family f)
    {
        switch (f)
        {
        case Family::GaussianUnbiased:
            return "gauss";
        case Family::GaussianBiased:
            return "gauss-biased";
        case Family::QpskUnbiased:
            return "qpsk";
        case Family::QpskBiased:
            return "qpsk-biased";
        }
        return "unknown";
    }

    std::string_view to_string(Hyperprior h)
    {
        return h == Hyperprior::TwoPointReal ? "two-point" : "fixed-magnitude";
    }

    void validate(const Signaling &sig, bool allow_zero_power)
    {
        const bool p_ok = allow_zero_power ? sig.P >= 0.0 : sig.P > 0.0;
        require(std::isfinite(sig.P) && p_ok, ErrorKind::InvalidDomain,
                "symbol power P must be positive (got " + std::to_string(sig.P) + ")");
        if (!is_biased(sig.family))
        {
            require(sig.sigma_theta2 == 0.0, ErrorKind::InvalidDomain,
                    "unbiased signaling requires sigma_theta2 = 0");
            return;
        }
        require(std::isfinite(sig.sigma_theta2) && sig.sigma_theta2 >= 0.0, ErrorKind::InvalidDomain,
                "sigma_theta2 must be non-negative");
        require(sig.sigma_theta2 < sig.P || (sig.P == 0.0 && sig.sigma_theta2 == 0.0), ErrorKind::InvalidDomain,
                "sigma_theta2 must be below P");
        if (sig.family == Family::QpskBiased)
        {
            if (sig.hyperprior == Hyperprior::TwoPointReal)
                require(sig.sigma_theta2 <= 0.5 * sig.P, ErrorKind::InvalidDomain,
                        "biased QPSK with a real two-point bias needs sigma_theta2 <= P/2");
            else
                fail(ErrorKind::UnsupportedHyperprior,
                     "biased QPSK depends on the phase of theta; fixed-magnitude hyperprior is not defined for it");
        }
    }

    BiasAtoms bias_atoms(const Signaling &sig, ThetaDependence dep)
    {
        BiasAtoms a;
        const double s2 = effective_sigma_theta2(sig);
        if (s2 == 0.0)
        {
            a.atom[0] = {{0.0, 0.0}, 1.0};
            a.count = 1;
            return a;
        }
        const double s = std::sqrt(s2);
        if (sig.hyperprior == Hyperprior::TwoPointReal)
        {
            a.atom[0] = {{s, 0.0}, 0.5};
            a.atom[1] = {{-s, 0.0}, 0.5};
            a.count = 2;
            return a;
        }
        if (dep != ThetaDependence::MagnitudeOnly)
            fail(ErrorKind::UnsupportedHyperprior,
                 "fixed-magnitude hyperprior only supports functions of |theta|^2");
        a.atom[0] = {{s, 0.0}, 1.0};
        a.count = 1;
        return a;
    }
}

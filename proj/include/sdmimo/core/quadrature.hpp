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

#ifndef SDMIMO_CORE_QUADRATURE_HPP
#define SDMIMO_CORE_QUADRATURE_HPP

#include "sdmimo/kernels/logistic.hpp"

#include <cstdint>
#include <vector>

namespace sdmimo::core
{
    struct QuadratureConfig
    {
        int hermite_nodes = 96;
        int legendre_nodes_tau = 32;
        int legendre_nodes_mu = 32;
        std::int64_t mc_oracle_samples = 10'000'000; // tests only
    };

    void validate(const QuadratureConfig &cfg);

    struct Rule
    {
        std::vector<double> nodes;
        std::vector<double> weights;
    };

    // Probabilists' Gauss-Hermite: integrates against N(0,1), weights sum to 1.
    Rule gauss_hermite(int n);

    // Gauss-Legendre on [0,1], weights sum to 1.
    Rule gauss_legendre_unit(int n);

    // Gauss-Legendre mapped to [a,b].
    Rule gauss_legendre(int n, double a, double b);

    struct QuadratureRules
    {
        Rule hermite;
        Rule legendre_tau;
        Rule legendre_mu;
    };

    QuadratureRules quadrature_rules(const QuadratureConfig &cfg);

    double normal_cdf(double x);
    double normal_pdf(double x);

    // E[1 - tanh U] and E[ln(1 + e^{-2U})] for U ~ N(m, v).
    //
    // Plain Gauss-Hermite in the standardized variable only resolves the kink of
    // the softplus at u = 0 when v is small. For v > 1 the integral is taken in
    // the u variable itself: composite Gauss-Legendre panels of width <= 1 on
    // [-19, 19] (clipped to m +- 9 sqrt(v)), Gaussian density folded into the
    // weights, and closed-form Gaussian tail integrals beyond -19 where
    // tail -> 2 and softplus -> -2u.
    class LlrIntegrator
    {
    public:
        explicit LlrIntegrator(int hermite_nodes = 96);

        kernels::LogisticSums expect(double m, double v) const;

        int hermite_nodes() const { return static_cast<int>(gh_.nodes.size()); }

        static const LlrIntegrator &standard();

    private:
        Rule gh_;
        Rule gl8_;
    };
}

#endif

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

#ifndef SDMIMO_REPLICA_SOLVER_HPP
#define SDMIMO_REPLICA_SOLVER_HPP

#include "sdmimo/core/awgn.hpp"
#include "sdmimo/core/quadrature.hpp"
#include "sdmimo/core/signaling.hpp"

#include <vector>

namespace sdmimo::replica
{
    using core::Signaling;

    struct Geometry
    {
        double alpha = 1.0; // M / N
        double beta = 0.5;  // M / T_c
        double tau0 = 0.0;  // T_tr / T_c
    };

    void validate(const Geometry &geom);

    struct EstimatorSolution
    {
        double tau = 0.0;
        double xi2 = 1.0;       // per-entry channel estimation MSE
        double sigma_tr2 = 0.0; // N0 + P xi2
        double sigma_c2 = 0.0;  // N0 + (P - s2) + s2 xi2
    };

    // P = 0 is accepted here (and only here) so the degenerate no-signal case can be exercised.
    EstimatorSolution solve_estimator(const Geometry &geom, const Signaling &sig, double N0, double tau);

    // Right-hand side of the estimator fixed point, g(xi2) with sigma_tr2 and sigma_c2 substituted.
    double estimator_map(const Geometry &geom, const Signaling &sig, double N0, double tau, double xi2);

    enum class GaussianMethod
    {
        Quadratic,
        Bisection
    };

    struct DetectorOptions
    {
        int scan_points = 400;       // log-spaced grid on [N0, N0 + 2P] for non-Gaussian priors
        double rel_tol = 1e-10;      // bisection stopping rule, relative to sigma2
        GaussianMethod gaussian = GaussianMethod::Quadratic;
    };

    struct DetectorCandidate
    {
        double sigma2 = 0.0;
        double free_energy = 0.0;
    };

    struct DetectorSolution
    {
        double tau = 0.0;
        double mu = 0.0;
        double sigma2 = 0.0;
        std::vector<DetectorCandidate> candidates;
        int selected_index = 0;
    };

    // Gain of the decoupled channel, sqrt((1 - xi2) / alpha).
    double decoupled_gain(const Geometry &geom, const EstimatorSolution &est);

    // E_theta[MMSE] and E_theta[I] (bits) of the decoupled channel at noise level sigma2.
    double expected_mse(const Geometry &geom, const Signaling &sig, const EstimatorSolution &est, double sigma2,
                        const core::LlrIntegrator &integ = core::LlrIntegrator::standard());
    double expected_mi_bits(const Geometry &geom, const Signaling &sig, const EstimatorSolution &est, double sigma2,
                            const core::LlrIntegrator &integ = core::LlrIntegrator::standard());

    double free_energy(const Geometry &geom, const Signaling &sig, double N0, const EstimatorSolution &est,
                       double mu, double sigma2, const core::LlrIntegrator &integ = core::LlrIntegrator::standard());

    DetectorSolution solve_detector(const Geometry &geom, const Signaling &sig, double N0,
                                    const EstimatorSolution &est, double mu, const DetectorOptions &opt = {},
                                    const core::LlrIntegrator &integ = core::LlrIntegrator::standard());

    // Detector solver bound to one (geometry, signaling, N0, stage). The prior MMSE
    // on the scan grid does not depend on mu, so it is tabulated once and reused
    // for every substage.
    class DetectorScan
    {
    public:
        DetectorScan(const Geometry &geom, const Signaling &sig, double N0, const EstimatorSolution &est,
                     const DetectorOptions &opt = {},
                     const core::LlrIntegrator &integ = core::LlrIntegrator::standard());

        DetectorSolution solve(double mu) const;

    private:
        double gaussian_quadratic(double mu) const;
        double bisect(double mu, double lo, double hi) const;
        double rhs(double mu, double sigma2) const;

        Geometry geom_;
        Signaling sig_;
        double N0_;
        EstimatorSolution est_;
        DetectorOptions opt_;
        const core::LlrIntegrator *integ_;
        std::vector<double> grid_;
        std::vector<double> grid_mse_;
    };
}

#endif

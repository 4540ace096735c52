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

#include "sdmimo/core/quadrature.hpp"
#include "sdmimo/core/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace sdmimo::core
{
    void validate(const QuadratureConfig &cfg)
    {
        require(cfg.hermite_nodes >= 2 && cfg.legendre_nodes_tau >= 2 && cfg.legendre_nodes_mu >= 2,
                ErrorKind::NonConvergence, "quadrature node counts must be >= 2");
        require(cfg.hermite_nodes <= 400 && cfg.legendre_nodes_tau <= 4096 && cfg.legendre_nodes_mu <= 4096,
                ErrorKind::InvalidConfig, "quadrature node count out of supported range");
        require(cfg.mc_oracle_samples >= 1, ErrorKind::InvalidConfig, "mc_oracle_samples must be positive");
    }

    Rule gauss_hermite(int n)
    {
        require(n >= 2, ErrorKind::NonConvergence, "Gauss-Hermite needs n >= 2");

        // Golub-Welsch on the Jacobi matrix of He_n (recurrence He_{k+1} = x He_k - k He_{k-1})
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
        for (int k = 1; k < n; ++k)
            J(k, k - 1) = J(k - 1, k) = std::sqrt(static_cast<double>(k));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
        require(es.info() == Eigen::Success, ErrorKind::NonConvergence, "Gauss-Hermite eigensolver failed");

        Rule r;
        r.nodes.resize(n);
        r.weights.resize(n);
        for (int i = 0; i < n; ++i)
        {
            // Newton polish on the orthonormal recurrence q_k = He_k / sqrt(k!);
            // the weight is the inverse Christoffel sum 1 / sum_k q_k(x)^2.
            double x = es.eigenvalues()(i);
            double w = 0.0;
            for (int it = 0; it < 4; ++it)
            {
                double q0 = 1.0, q1 = x;
                double sumsq = 1.0 + x * x;
                for (int k = 1; k < n - 1; ++k)
                {
                    const double q2 = (x * q1 - std::sqrt(static_cast<double>(k)) * q0) / std::sqrt(k + 1.0);
                    q0 = q1;
                    q1 = q2;
                    sumsq += q1 * q1;
                }
                const double qn = (x * q1 - std::sqrt(n - 1.0) * q0) / std::sqrt(static_cast<double>(n));
                const double dqn = std::sqrt(static_cast<double>(n)) * q1;
                w = 1.0 / sumsq;
                const double dx = qn / dqn;
                x -= dx;
                if (std::fabs(dx) < 1e-15 * std::max(1.0, std::fabs(x)))
                    break;
            }
            r.nodes[i] = x;
            r.weights[i] = w;
        }

        double total = 0.0;
        for (double w : r.weights)
            total += w;
        for (double &w : r.weights)
            w /= total;

        // symmetrize
        for (int i = 0; i < n / 2; ++i)
        {
            const int j = n - 1 - i;
            const double x = 0.5 * (r.nodes[j] - r.nodes[i]);
            const double w = 0.5 * (r.weights[i] + r.weights[j]);
            r.nodes[i] = -x;
            r.nodes[j] = x;
            r.weights[i] = r.weights[j] = w;
        }
        if (n % 2 == 1)
            r.nodes[n / 2] = 0.0;
        return r;
    }

    Rule gauss_legendre(int n, double a, double b)
    {
        require(n >= 2, ErrorKind::NonConvergence, "Gauss-Legendre needs n >= 2");
        Rule r;
        r.nodes.resize(n);
        r.weights.resize(n);
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        const int m = (n + 1) / 2;
        for (int i = 0; i < m; ++i)
        {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 1.0;
            for (int it = 0; it < 100; ++it)
            {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k)
                {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::fabs(dx) < 1e-16)
                    break;
            }
            // recompute derivative at the final node
            {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k)
                {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
            }
            const double w = 2.0 / ((1.0 - x * x) * dp * dp);
            r.nodes[i] = mid - half * x;
            r.nodes[n - 1 - i] = mid + half * x;
            r.weights[i] = r.weights[n - 1 - i] = half * w;
        }
        if (n % 2 == 1)
            r.nodes[n / 2] = mid;
        return r;
    }

    Rule gauss_legendre_unit(int n) { return gauss_legendre(n, 0.0, 1.0); }

    QuadratureRules quadrature_rules(const QuadratureConfig &cfg)
    {
        validate(cfg);
        return {gauss_hermite(cfg.hermite_nodes), gauss_legendre_unit(cfg.legendre_nodes_tau),
                gauss_legendre_unit(cfg.legendre_nodes_mu)};
    }

    double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

    double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

    LlrIntegrator::LlrIntegrator(int hermite_nodes)
        : gh_(gauss_hermite(hermite_nodes)), gl8_(gauss_legendre(8, 0.0, 1.0))
    {
    }

    const LlrIntegrator &LlrIntegrator::standard()
    {
        static const LlrIntegrator inst(96);
        return inst;
    }

    kernels::LogisticSums LlrIntegrator::expect(double m, double v) const
    {
        if (v <= 1.0)
            return kernels::logistic_sums_affine(gh_.nodes, gh_.weights, m, std::sqrt(std::max(v, 0.0)));

        constexpr double edge = 19.0;
        const double sd = std::sqrt(v);
        kernels::LogisticSums out;

        const double lo = std::max(m - 9.0 * sd, -edge);
        const double hi = std::min(m + 9.0 * sd, edge);
        if (lo < hi)
        {
            const int panels = static_cast<int>(std::ceil(hi - lo));
            const double width = (hi - lo) / panels;
            constexpr int max_nodes = 8 * 40;
            double u[max_nodes], w[max_nodes];
            int k = 0;
            for (int p = 0; p < panels; ++p)
                for (int j = 0; j < 8; ++j, ++k)
                {
                    u[k] = lo + width * (p + gl8_.nodes[j]);
                    w[k] = width * gl8_.weights[j];
                }
            out = kernels::logistic_sums_gauss({u, static_cast<std::size_t>(k)}, {w, static_cast<std::size_t>(k)},
                                               m, 0.5 / v);
            const double norm = 1.0 / (sd * std::sqrt(2.0 * std::numbers::pi));
            out.tail *= norm;
            out.softplus *= norm;
        }

        // U < -19: tail = 2, softplus = -2U
        const double a = (-edge - m) / sd;
        const double mass = normal_cdf(a);
        out.tail += 2.0 * mass;
        out.softplus += -2.0 * (m * mass - sd * normal_pdf(a));
        return out;
    }
}

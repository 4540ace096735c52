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

#include "sdmimo/bounds/bounds.hpp"
#include "sdmimo/core/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

namespace sdmimo::bounds
{
    namespace
    {
        std::string fmt(double x)
        {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.6g", x);
            return buf;
        }

        double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }

        // f(x) - f(s) for f(x) = (1 + 1/x) ln(1 + x), x = s (1 + k s); nats
        double low_snr_nats(double k, double s)
        {
            const double x = s * (1.0 + k * s);
            if (x < 0.05)
            {
                // f(x) = 1 + sum_{n>=1} (-1)^{n+1} x^n / (n (n+1))
                const double l = std::log1p(k * s);
                double acc = 0.0, sn = 1.0;
                for (int n = 1; n < 200; ++n)
                {
                    sn *= s;
                    const double term = sn * std::expm1(n * l) / (n * (n + 1.0));
                    acc += (n % 2 == 1) ? term : -term;
                    if (std::fabs(term) <= 1e-18 * std::fabs(acc))
                        break;
                }
                return acc;
            }
            auto f = [](double y) { return (1.0 + 1.0 / y) * std::log1p(y); };
            return f(x) - f(s);
        }
    }

    double rate_ceiling(const Geometry &geom, const Signaling &sig, double N0)
    {
        if (core::is_qpsk(sig.family))
            return 2.0 * (1.0 - geom.tau0);
        return (1.0 - geom.tau0) * std::log2(1.0 + sig.P / (geom.alpha * N0));
    }

    RateBound achievable_rate(const Geometry &geom, const Signaling &sig, double N0, const QuadratureConfig &quad,
                              const RateOptions &opt)
    {
        replica::validate(geom);
        core::validate(sig);
        core::validate(quad);
        require(std::isfinite(N0) && N0 > 0.0, ErrorKind::InvalidDomain, "N0 must be > 0");

        std::vector<double> tn, tw;
        auto add_panel = [&](double a, double b)
        {
            const core::Rule r = core::gauss_legendre(quad.legendre_nodes_tau, a, b);
            tn.insert(tn.end(), r.nodes.begin(), r.nodes.end());
            tw.insert(tw.end(), r.weights.begin(), r.weights.end());
        };
        if (geom.tau0 < geom.beta && geom.beta < 1.0)
        {
            add_panel(geom.tau0, geom.beta);
            add_panel(geom.beta, 1.0);
        }
        else
            add_panel(geom.tau0, 1.0);

        const core::Rule mr = core::gauss_legendre_unit(quad.legendre_nodes_mu);
        const std::size_t nt = tn.size(), nm = mr.nodes.size();
        const core::LlrIntegrator integ(quad.hermite_nodes);

        std::vector<double> row(nt, 0.0);
        std::vector<IntegrandSample> samples(opt.keep_samples ? nt * nm : 0);

        core::parallel_for(
            nt,
            [&](std::size_t i)
            {
                const double tau = tn[i];
                double mu = 0.0;
                try
                {
                    replica::EstimatorSolution est = replica::solve_estimator(geom, sig, N0, tau);
                    if (opt.perfect_csi)
                    {
                        const double s2 = core::effective_sigma_theta2(sig);
                        est.xi2 = 0.0;
                        est.sigma_tr2 = N0;
                        est.sigma_c2 = N0 + sig.P - s2;
                    }
                    const replica::DetectorScan scan(geom, sig, N0, est, opt.detector, integ);
                    double acc = 0.0;
                    for (std::size_t j = 0; j < nm; ++j)
                    {
                        mu = mr.nodes[j];
                        const replica::DetectorSolution det = scan.solve(mu);
                        const double val = replica::expected_mi_bits(geom, sig, est, det.sigma2, integ);
                        acc += mr.weights[j] * val;
                        if (opt.keep_samples)
                            samples[i * nm + j] = {tau, mu, est.xi2, det.sigma2, val};
                    }
                    row[i] = acc;
                }
                catch (const Error &e)
                {
                    throw Error(e.kind(), e.detail() + " (tau=" + fmt(tau) + ", mu=" + fmt(mu) + ")");
                }
            },
            opt.threads);

        RateBound out;
        for (std::size_t i = 0; i < nt; ++i)
            out.rate_bits_per_tx += tw[i] * row[i];
        out.tau_nodes = static_cast<int>(nt);
        out.mu_nodes = static_cast<int>(nm);
        out.integrand_samples = std::move(samples);
        return out;
    }

    double c_rm(double z, double x)
    {
        require(z > 0.0 && x >= 0.0 && std::isfinite(z) && std::isfinite(x), ErrorKind::InvalidDomain,
                "c_rm needs z > 0, x >= 0");
        if (x == 0.0)
            return 0.0;
        const double sz = std::sqrt(z);
        const double d = std::sqrt(x * (1.0 + sz) * (1.0 + sz) + 1.0) - std::sqrt(x * (1.0 - sz) * (1.0 - sz) + 1.0);
        const double F = d * d;
        return z * std::log2(1.0 + x - F / 4.0) + std::log2(1.0 + x * z - F / 4.0) -
               F / (4.0 * x) * std::numbers::log2e;
    }

    double hh_bound(const Geometry &geom, double P, double N0, const HhOptions &opt)
    {
        require(geom.alpha > 0.0 && geom.beta > 0.0 && geom.beta <= 1.0, ErrorKind::InvalidDomain,
                "invalid geometry for hh_bound");
        require(std::isfinite(N0) && N0 > 0.0 && std::isfinite(P) && P >= 0.0, ErrorKind::InvalidDomain,
                "hh_bound needs P >= 0, N0 > 0");
        const double tau0 = opt.tau0.value_or(geom.beta);
        require(tau0 >= 0.0 && tau0 < 1.0, ErrorKind::InvalidDomain, "hh_bound needs tau0 in [0, 1)");
        if (P == 0.0 || tau0 == 0.0)
            return 0.0;

        const double a = geom.alpha, b = geom.beta;
        if (opt.power == HhPower::Equal)
        {
            const double xp2 = 1.0 / (1.0 + tau0 * P / (b * N0));
            const double n0p = N0 + P * xp2;
            const double snr = P * (1.0 - xp2) / (a * n0p);
            return (1.0 - tau0) * c_rm(a, snr) / a;
        }

        require(tau0 >= b, ErrorKind::InvalidDomain, "optimized-power hh_bound needs tau0 >= beta");
        // per-block energy rho T split between T_tr pilots and T_d data symbols;
        // d = (T_d - M) / T_c, closed-form optimum of the effective SNR
        const double rho = P / N0;
        const double d = (1.0 - tau0) - b;
        double rho_eff;
        if (std::fabs(d) < 1e-12)
            rho_eff = rho * rho / (4.0 * b * (b + rho));
        else
        {
            const double g = (b + rho) * (1.0 - tau0) / (rho * d);
            if (d > 0.0)
            {
                const double r = std::sqrt(g) - std::sqrt(g - 1.0);
                rho_eff = rho / d * r * r;
            }
            else
            {
                const double r = std::sqrt(-g) - std::sqrt(1.0 - g);
                rho_eff = rho / (-d) * r * r;
            }
        }
        return (1.0 - tau0) * c_rm(a, rho_eff / a) / a;
    }

    double low_snr_rate(double beta_over_alpha, double s)
    {
        require(std::isfinite(s) && s > 0.0, ErrorKind::InvalidDomain, "s must be > 0");
        require(std::isfinite(beta_over_alpha) && beta_over_alpha > 0.0, ErrorKind::InvalidDomain,
                "beta/alpha must be > 0");
        return low_snr_nats(beta_over_alpha, s) * std::numbers::log2e;
    }

    LowSnrCurve low_snr_curve(double beta_over_alpha, const std::vector<double> &s_grid)
    {
        LowSnrCurve c;
        c.points.reserve(s_grid.size());
        for (double s : s_grid)
        {
            const double R = low_snr_rate(beta_over_alpha, s);
            require(R > 0.0, ErrorKind::NonConvergence, "non-positive low-SNR rate at s=" + fmt(s));
            c.points.push_back({s, R, 10.0 * std::log10(beta_over_alpha * s / R)});
        }
        for (std::size_t i = 1; i < c.points.size(); ++i)
            if (c.points[i].eb_n0_db < c.points[c.argmin].eb_n0_db)
                c.argmin = i;
        return c;
    }

    double multiplexing_gain(const Geometry &geom, const Signaling &sig, std::pair<double, double> snr_db,
                             const QuadratureConfig &quad)
    {
        require(snr_db.first != snr_db.second, ErrorKind::InvalidDomain, "multiplexing_gain needs two distinct SNRs");
        const double c1 = achievable_rate(geom, sig, sig.P / db_to_lin(snr_db.first), quad).rate_bits_per_tx;
        const double c2 = achievable_rate(geom, sig, sig.P / db_to_lin(snr_db.second), quad).rate_bits_per_tx;
        return (c2 - c1) / ((snr_db.second - snr_db.first) / 10.0 * std::log2(10.0));
    }

    double monotone_cubic_eval(const std::vector<double> &x, const std::vector<double> &y, double xq)
    {
        const std::size_t n = x.size();
        require(n >= 2 && y.size() == n, ErrorKind::InvalidDomain, "interpolation needs >= 2 matching points");
        for (std::size_t i = 1; i < n; ++i)
            require(x[i] > x[i - 1], ErrorKind::InvalidDomain, "interpolation abscissae must increase");
        require(xq >= x.front() && xq <= x.back(), ErrorKind::InvalidDomain, "interpolation query out of range");

        // Fritsch-Carlson tangents
        std::vector<double> h(n - 1), del(n - 1), m(n);
        for (std::size_t i = 0; i + 1 < n; ++i)
        {
            h[i] = x[i + 1] - x[i];
            del[i] = (y[i + 1] - y[i]) / h[i];
        }
        m[0] = del[0];
        m[n - 1] = del[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i)
            m[i] = del[i - 1] * del[i] <= 0.0 ? 0.0 : 0.5 * (del[i - 1] + del[i]);
        for (std::size_t i = 0; i + 1 < n; ++i)
        {
            if (del[i] == 0.0)
            {
                m[i] = m[i + 1] = 0.0;
                continue;
            }
            const double a = m[i] / del[i], b = m[i + 1] / del[i];
            const double r = a * a + b * b;
            if (r > 9.0)
            {
                const double t = 3.0 / std::sqrt(r);
                m[i] = t * a * del[i];
                m[i + 1] = t * b * del[i];
            }
        }

        std::size_t k = std::upper_bound(x.begin(), x.end(), xq) - x.begin();
        k = std::clamp<std::size_t>(k, 1, n - 1) - 1;
        const double t = (xq - x[k]) / h[k];
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y[k] + (t3 - 2 * t2 + t) * h[k] * m[k] + (-2 * t3 + 3 * t2) * y[k + 1] +
               (t3 - t2) * h[k] * m[k + 1];
    }
}

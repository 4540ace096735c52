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

#include "sdmimo/replica/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace sdmimo::replica
{
    using core::ThetaDependence;

    namespace
    {
        std::string fmt(double x)
        {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.6g", x);
            return buf;
        }

        ThetaDependence dependence(const Signaling &sig)
        {
            return core::is_gaussian(sig.family) ? ThetaDependence::MagnitudeOnly : ThetaDependence::Full;
        }
    }

    void validate(const Geometry &geom)
    {
        require(std::isfinite(geom.alpha) && geom.alpha > 0.0, ErrorKind::InvalidDomain, "alpha must be > 0");
        require(std::isfinite(geom.beta) && geom.beta > 0.0 && geom.beta <= 1.0, ErrorKind::InvalidDomain,
                "beta must lie in (0, 1]");
        require(std::isfinite(geom.tau0) && geom.tau0 >= 0.0 && geom.tau0 < 1.0, ErrorKind::InvalidDomain,
                "tau0 must lie in [0, 1)");
    }

    double estimator_map(const Geometry &geom, const Signaling &sig, double N0, double tau, double xi2)
    {
        const double s2 = core::effective_sigma_theta2(sig);
        const double str = N0 + sig.P * xi2;
        const double sc = N0 + (sig.P - s2) + s2 * xi2;
        return 1.0 / (1.0 + tau * sig.P / (str * geom.beta) + (1.0 - tau) * s2 / (sc * geom.beta));
    }

    EstimatorSolution solve_estimator(const Geometry &geom, const Signaling &sig, double N0, double tau)
    {
        validate(geom);
        core::validate(sig, true);
        require(std::isfinite(N0) && N0 > 0.0, ErrorKind::InvalidDomain, "N0 must be > 0");
        require(tau >= geom.tau0 && tau <= 1.0, ErrorKind::InvalidDomain,
                "tau = " + fmt(tau) + " outside [tau0, 1]");

        // h(u) = g(u) - u with g increasing in u, g(0) > 0, g(1) <= 1
        double lo = 0.0, hi = 1.0;
        const double h_hi = estimator_map(geom, sig, N0, tau, hi) - hi;
        const double h_lo = estimator_map(geom, sig, N0, tau, lo) - lo;
        require(h_lo > 0.0 && h_hi <= 0.0, ErrorKind::BracketFailure, "estimator fixed point not bracketed on [0,1]");

        if (h_hi == 0.0)
            lo = hi;
        else
        {
            // absolute 1e-12 is not enough at high SNR where xi2 ~ 1e-7, so stop on relative width
            for (int it = 0; it < 400; ++it)
            {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi)
                    break;
                const double h = estimator_map(geom, sig, N0, tau, mid) - mid;
                if (h > 0.0)
                    lo = mid;
                else
                    hi = mid;
                if (hi - lo <= 1e-15 * hi)
                    break;
            }
        }

        EstimatorSolution e;
        e.tau = tau;
        e.xi2 = 0.5 * (lo + hi);
        const double s2 = core::effective_sigma_theta2(sig);
        e.sigma_tr2 = N0 + sig.P * e.xi2;
        e.sigma_c2 = N0 + (sig.P - s2) + s2 * e.xi2;
        require(e.xi2 > 0.0 && e.xi2 <= 1.0, ErrorKind::BracketFailure, "estimator returned xi2 outside (0,1]");
        return e;
    }

    double decoupled_gain(const Geometry &geom, const EstimatorSolution &est)
    {
        return std::sqrt(std::max(0.0, 1.0 - est.xi2) / geom.alpha);
    }

    double expected_mse(const Geometry &geom, const Signaling &sig, const EstimatorSolution &est, double sigma2,
                        const core::LlrIntegrator &integ)
    {
        const double a = decoupled_gain(geom, est);
        return core::hyperprior_expect(
            sig, [&](std::complex<double> th) { return core::awgn_mmse(sig, {a, sigma2, th}, integ); },
            dependence(sig));
    }

    double expected_mi_bits(const Geometry &geom, const Signaling &sig, const EstimatorSolution &est, double sigma2,
                            const core::LlrIntegrator &integ)
    {
        const double a = decoupled_gain(geom, est);
        return core::hyperprior_expect(
            sig, [&](std::complex<double> th) { return core::awgn_mutual_info(sig, {a, sigma2, th}, integ); },
            dependence(sig));
    }

    double free_energy(const Geometry &geom, const Signaling &sig, double N0, const EstimatorSolution &est,
                       double mu, double sigma2, const core::LlrIntegrator &integ)
    {
        require(sigma2 >= N0, ErrorKind::InvalidDomain, "free energy needs sigma2 >= N0");
        require(mu >= 0.0 && mu <= 1.0, ErrorKind::InvalidDomain, "mu must lie in [0,1]");
        const double mi = mu < 1.0 ? expected_mi_bits(geom, sig, est, sigma2, integ) : 0.0;
        return (1.0 - mu) * mi +
               (core::kl_gauss(N0, sigma2) + sig.P * est.xi2 / sigma2 * std::numbers::log2e) / geom.alpha;
    }

    DetectorScan::DetectorScan(const Geometry &geom, const Signaling &sig, double N0, const EstimatorSolution &est,
                               const DetectorOptions &opt, const core::LlrIntegrator &integ)
        : geom_(geom), sig_(sig), N0_(N0), est_(est), opt_(opt), integ_(&integ)
    {
        validate(geom_);
        core::validate(sig_);
        require(std::isfinite(N0) && N0 > 0.0, ErrorKind::InvalidDomain, "N0 must be > 0");
        require(est.xi2 >= 0.0 && est.xi2 <= 1.0, ErrorKind::InvalidDomain, "estimator solution out of range");

        if (core::is_gaussian(sig_.family))
            return;

        require(opt_.scan_points >= 2, ErrorKind::InvalidConfig, "scan_points must be >= 2");
        const int n = opt_.scan_points;
        grid_.resize(n);
        grid_mse_.resize(n);
        const double lo = std::log(N0_), hi = std::log(N0_ + 2.0 * sig_.P);
        for (int i = 0; i < n; ++i)
        {
            grid_[i] = i == 0 ? N0_ : (i == n - 1 ? N0_ + 2.0 * sig_.P : std::exp(lo + (hi - lo) * i / (n - 1)));
            grid_mse_[i] = expected_mse(geom_, sig_, est_, grid_[i], *integ_);
        }
    }

    double DetectorScan::rhs(double mu, double sigma2) const
    {
        return N0_ + sig_.P * est_.xi2 +
               (1.0 - mu) * (1.0 - est_.xi2) * expected_mse(geom_, sig_, est_, sigma2, *integ_);
    }

    double DetectorScan::bisect(double mu, double lo, double hi) const
    {
        // invariant: rhs(lo) - lo >= 0 >= rhs(hi) - hi
        for (int it = 0; it < 300 && hi - lo > opt_.rel_tol * hi; ++it)
        {
            const double mid = 0.5 * (lo + hi);
            if (rhs(mu, mid) - mid >= 0.0)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    }

    double DetectorScan::gaussian_quadratic(double mu) const
    {
        // all supported hyperpriors fix |theta|^2, so v is deterministic
        const double c0 = N0_ + sig_.P * est_.xi2;
        const double v = (1.0 - est_.xi2) * (sig_.P - core::effective_sigma_theta2(sig_));
        const double a = geom_.alpha;
        const double b = v - a * c0 - (1.0 - mu) * v * a;
        const double disc = std::sqrt(b * b + 4.0 * a * c0 * v);
        return b <= 0.0 ? (disc - b) / (2.0 * a) : 2.0 * c0 * v / (b + disc);
    }

    DetectorSolution DetectorScan::solve(double mu) const
    {
        require(mu >= 0.0 && mu <= 1.0, ErrorKind::InvalidDomain, "mu = " + fmt(mu) + " outside [0,1]");
        DetectorSolution s;
        s.tau = est_.tau;
        s.mu = mu;

        const double c0 = N0_ + sig_.P * est_.xi2;
        std::vector<double> roots;

        if (mu == 1.0)
            roots.push_back(c0);
        else if (core::is_gaussian(sig_.family))
        {
            if (opt_.gaussian == GaussianMethod::Quadratic)
                roots.push_back(gaussian_quadratic(mu));
            else
            {
                const double hi = c0 + (1.0 - mu) * (1.0 - est_.xi2) * sig_.P * (1.0 + 1e-12) + 1e-300;
                roots.push_back(bisect(mu, c0, hi));
            }
        }
        else
        {
            const double scale = (1.0 - mu) * (1.0 - est_.xi2);
            auto h = [&](std::size_t i) { return c0 + scale * grid_mse_[i] - grid_[i]; };
            double h_prev = h(0);
            if (h_prev == 0.0)
                roots.push_back(grid_[0]);
            for (std::size_t i = 1; i < grid_.size(); ++i)
            {
                const double h_cur = h(i);
                if (h_cur == 0.0)
                    roots.push_back(grid_[i]);
                else if (h_prev > 0.0 && h_cur < 0.0)
                    roots.push_back(bisect(mu, grid_[i - 1], grid_[i]));
                else if (h_prev < 0.0 && h_cur > 0.0)
                {
                    // upward crossing: flip the bracket orientation
                    double lo = grid_[i - 1], hi = grid_[i];
                    for (int it = 0; it < 300 && hi - lo > opt_.rel_tol * hi; ++it)
                    {
                        const double mid = 0.5 * (lo + hi);
                        if (rhs(mu, mid) - mid <= 0.0)
                            lo = mid;
                        else
                            hi = mid;
                    }
                    roots.push_back(0.5 * (lo + hi));
                }
                h_prev = h_cur;
            }
        }

        require(!roots.empty(), ErrorKind::NoSolution,
                "no detector fixed point at tau=" + fmt(est_.tau) + " mu=" + fmt(mu));

        for (double r : roots)
            s.candidates.push_back({r, free_energy(geom_, sig_, N0_, est_, mu, r, *integ_)});

        s.selected_index = 0;
        for (std::size_t i = 1; i < s.candidates.size(); ++i)
            if (s.candidates[i].free_energy < s.candidates[s.selected_index].free_energy)
                s.selected_index = static_cast<int>(i);
        s.sigma2 = s.candidates[s.selected_index].sigma2;
        return s;
    }

    DetectorSolution solve_detector(const Geometry &geom, const Signaling &sig, double N0,
                                    const EstimatorSolution &est, double mu, const DetectorOptions &opt,
                                    const core::LlrIntegrator &integ)
    {
        return DetectorScan(geom, sig, N0, est, opt, integ).solve(mu);
    }
}

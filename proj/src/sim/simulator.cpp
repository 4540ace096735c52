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

#include "sdmimo/sim/simulator.hpp"
#include "sdmimo/core/parallel.hpp"
#include "sdmimo/replica/solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace sdmimo::sim
{
    namespace
    {
        std::uint64_t splitmix64(std::uint64_t &x)
        {
            std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
            return z ^ (z >> 31);
        }

        double uniform01(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

        // +-A per real dimension with P(+) = (1 + theta_r / A) / 2
        double biased_sign(std::mt19937_64 &rng, double amp, double theta_r)
        {
            const double p_plus = 0.5 * (1.0 + theta_r / amp);
            return uniform01(rng) < p_plus ? amp : -amp;
        }

        cd draw_bias(const core::Signaling &sig, std::mt19937_64 &rng)
        {
            const double s2 = core::effective_sigma_theta2(sig);
            if (s2 == 0.0)
                return {0.0, 0.0};
            const double s = std::sqrt(s2);
            if (sig.hyperprior == core::Hyperprior::TwoPointReal)
                return {uniform01(rng) < 0.5 ? s : -s, 0.0};
            const double ph = 2.0 * std::numbers::pi * uniform01(rng);
            return std::polar(s, ph);
        }

        cd draw_symbol(const core::Signaling &sig, cd theta, std::mt19937_64 &rng)
        {
            if (core::is_qpsk(sig.family))
            {
                const double amp = std::sqrt(0.5 * sig.P);
                const double re = biased_sign(rng, amp, theta.real());
                const double im = biased_sign(rng, amp, theta.imag());
                return {re, im};
            }
            return theta + std::sqrt(sig.P - std::norm(theta)) * complex_normal(rng);
        }

        struct Acc
        {
            double n = 0, mse = 0, mse2 = 0, dg = 0, dg2 = 0, oa = 0, oa2 = 0;
            double ore = 0, ore2 = 0, oim = 0, oim2 = 0;

            void merge(const Acc &o)
            {
                n += o.n;
                mse += o.mse;
                mse2 += o.mse2;
                dg += o.dg;
                dg2 += o.dg2;
                oa += o.oa;
                oa2 += o.oa2;
                ore += o.ore;
                ore2 += o.ore2;
                oim += o.oim;
                oim2 += o.oim2;
            }
        };

        Stat finish(double s, double s2, double n)
        {
            Stat r;
            r.mean = s / n;
            if (n > 1.0)
            {
                const double var = std::max(0.0, (s2 - s * s / n) / (n - 1.0));
                r.stderr_ = std::sqrt(var / n);
            }
            return r;
        }

        std::string num(double x)
        {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.6g", x);
            return buf;
        }
    }

    void validate(const McConfig &c, bool allow_zero_noise)
    {
        auto bad = [](const std::string &w) { fail(ErrorKind::InvalidConfig, w); };
        if (c.M < 1 || c.N < 1)
            bad("M and N must be >= 1");
        if (c.M > 4096 || c.N > 4096 || c.T_c > 1 << 20)
            bad("dimensions out of supported range");
        if (c.T_tr < 0 || c.T_tr >= c.T_c)
            bad("need 0 <= T_tr < T_c");
        if (c.stage_t <= c.T_tr || c.stage_t > c.T_c)
            bad("need T_tr < t <= T_c (t=" + std::to_string(c.stage_t) + ")");
        if (c.substage_m < 1 || c.substage_m > c.M)
            bad("need 1 <= m <= M");
        if (c.trials < 1)
            bad("trials must be >= 1");
        if (!(std::isfinite(c.N0) && (c.N0 > 0.0 || (allow_zero_noise && c.N0 == 0.0))))
            bad("N0 must be > 0");
        try
        {
            core::validate(c.sig);
        }
        catch (const Error &e)
        {
            fail(ErrorKind::InvalidConfig, e.detail());
        }
        if (core::effective_sigma_theta2(c.sig) >= c.sig.P)
            bad("sigma_theta2 must be below P");
    }

    std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial)
    {
        std::uint64_t x = seed ^ (0xD1B54A32D192ED03ULL * (trial + 1));
        std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(x)), static_cast<std::uint32_t>(splitmix64(x)),
                          static_cast<std::uint32_t>(splitmix64(x)), static_cast<std::uint32_t>(splitmix64(x))};
        return std::mt19937_64(seq);
    }

    cd complex_normal(std::mt19937_64 &rng)
    {
        // variance 1/2 per real dimension
        const double u1 = 1.0 - uniform01(rng); // (0, 1]
        const double u2 = uniform01(rng);
        return std::polar(std::sqrt(-std::log(u1)), 2.0 * std::numbers::pi * u2);
    }

    BlockState simulate_block(const McConfig &cfg, std::mt19937_64 &rng)
    {
        validate(cfg, true);
        const int M = cfg.M, N = cfg.N, T = cfg.T_c;
        BlockState b;
        b.H.resize(N, M);
        b.X.resize(M, T);
        b.Theta = Eigen::MatrixXcd::Zero(M, T);
        b.Noise.resize(N, T);

        for (int j = 0; j < M; ++j)
            for (int i = 0; i < N; ++i)
                b.H(i, j) = complex_normal(rng);

        const double amp = std::sqrt(0.5 * cfg.sig.P);
        for (int t = 0; t < T; ++t)
            for (int m = 0; m < M; ++m)
            {
                if (t < cfg.T_tr)
                {
                    // QPSK pilot
                    const double re = uniform01(rng) < 0.5 ? amp : -amp;
                    const double im = uniform01(rng) < 0.5 ? amp : -amp;
                    b.X(m, t) = {re, im};
                }
                else
                {
                    b.Theta(m, t) = draw_bias(cfg.sig, rng);
                    b.X(m, t) = draw_symbol(cfg.sig, b.Theta(m, t), rng);
                }
            }

        const double sn = std::sqrt(cfg.N0);
        for (int t = 0; t < T; ++t)
            for (int i = 0; i < N; ++i)
                b.Noise(i, t) = sn * complex_normal(rng);

        b.Y = b.H * b.X / std::sqrt(static_cast<double>(M)) + b.Noise;
        return b;
    }

    ChannelEstimate lmmse_channel_estimate(const BlockState &b, const McConfig &cfg)
    {
        const int M = cfg.M, T = cfg.T_c, t = cfg.stage_t - 1; // 0-based current column
        const double P = cfg.sig.P;
        const double sM = std::sqrt(static_cast<double>(M));

        Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(M, M);
        Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(cfg.N, M); // sum y v^H / (sqrt(M) w)
        for (int tp = 0; tp < T; ++tp)
        {
            if (tp == t)
                continue;
            double w;
            Eigen::VectorXcd v;
            if (tp < t)
            {
                v = b.X.col(tp);
                w = cfg.N0;
            }
            else
            {
                v = b.Theta.col(tp);
                const double s2 = v.squaredNorm() / M;
                w = P - s2 + cfg.N0;
                if (s2 == 0.0)
                    continue; // carries no information
            }
            A.noalias() += v * v.adjoint() / (M * w);
            B.noalias() += b.Y.col(tp) * v.adjoint() / (sM * w);
        }

        Eigen::LLT<Eigen::MatrixXcd> llt(A);
        require(llt.info() == Eigen::Success, ErrorKind::Singular, "estimator Gram matrix is not positive definite");

        ChannelEstimate e;
        e.Xi = llt.solve(Eigen::MatrixXcd::Identity(M, M));
        e.Xi = 0.5 * (e.Xi + e.Xi.adjoint()).eval();
        e.Hhat = B * e.Xi;

        if (cfg.check_spectrum)
        {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A, Eigen::EigenvaluesOnly);
            const double lo = es.eigenvalues().minCoeff();
            require(lo >= 1.0 - 1e-9, ErrorKind::Singular,
                    "Xi_t has an eigenvalue above one (min eig of inverse " + num(lo) + ")");
        }
        return e;
    }

    Detection lmmse_detect(const BlockState &b, const ChannelEstimate &est, const McConfig &cfg)
    {
        const int M = cfg.M, m = cfg.substage_m - 1, t = cfg.stage_t - 1;
        const int k = M - m; // undetected streams m..M-1
        const double P = cfg.sig.P;
        const double sM = std::sqrt(static_cast<double>(M));

        double zeta = 0.0;
        for (int i = 0; i < M; ++i)
            zeta += (i < m ? std::norm(b.X(i, t)) : P) * est.Xi(i, i).real();
        zeta /= M;
        const double nv = cfg.N0 + zeta;

        Eigen::VectorXcd r = b.Y.col(t);
        if (m > 0)
            r.noalias() -= est.Hhat.leftCols(m) * b.X.col(t).head(m) / sM;

        const Eigen::MatrixXcd Hm = est.Hhat.rightCols(k);
        Eigen::VectorXd sinv(k);
        Eigen::VectorXcd th = b.Theta.col(t).tail(k);
        for (int i = 0; i < k; ++i)
        {
            const double s = P - std::norm(th(i));
            require(s > 0.0, ErrorKind::Singular, "prior variance of a stream is zero");
            sinv(i) = 1.0 / s;
        }

        Eigen::MatrixXcd G = Hm.adjoint() * Hm / (M * nv);
        G.diagonal() += sinv.cast<cd>();
        Eigen::LLT<Eigen::MatrixXcd> llt(G);
        require(llt.info() == Eigen::Success, ErrorKind::Singular, "detector posterior precision not positive definite");

        const Eigen::VectorXcd rhs = Hm.adjoint() * r / (sM * nv) + (sinv.cast<cd>().array() * th.array()).matrix();
        const Eigen::VectorXcd xh = llt.solve(rhs);
        Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(k);
        e0(0) = 1.0;
        const Eigen::VectorXcd c0 = llt.solve(e0);
        return {xh(0), c0(0).real(), zeta};
    }

    McPrediction predict(const McConfig &cfg)
    {
        McPrediction p;
        p.alpha = static_cast<double>(cfg.M) / cfg.N;
        p.beta = static_cast<double>(cfg.M) / cfg.T_c;
        p.tau = static_cast<double>(cfg.stage_t - 1) / cfg.T_c;
        p.mu = static_cast<double>(cfg.substage_m - 1) / cfg.M;
        const replica::Geometry g{p.alpha, p.beta, static_cast<double>(cfg.T_tr) / cfg.T_c};
        const auto est = replica::solve_estimator(g, cfg.sig, cfg.N0, p.tau);
        p.xi2 = est.xi2;

        // the simulated detector is linear, so its large-system twin is the Gaussian fixed point
        core::Signaling gs = cfg.sig;
        gs.family = core::is_biased(cfg.sig.family) ? core::Family::GaussianBiased : core::Family::GaussianUnbiased;
        if (gs.family == core::Family::GaussianBiased && gs.hyperprior == core::Hyperprior::FixedMagnitude)
            gs.hyperprior = core::Hyperprior::TwoPointReal; // same |theta|^2, which is all that matters here
        const auto det = replica::solve_detector(g, gs, cfg.N0, est, p.mu);
        p.sigma2 = det.sigma2;
        const double v = cfg.sig.P - core::effective_sigma_theta2(cfg.sig);
        const double a2 = (1.0 - est.xi2) / p.alpha;
        p.normalized_mse = v * det.sigma2 / (a2 * v + det.sigma2) / cfg.sig.P;
        return p;
    }

    McResult measure_mse(const McConfig &cfg)
    {
        validate(cfg);
        constexpr std::int64_t chunk = 256;
        const std::int64_t nchunks = (cfg.trials + chunk - 1) / chunk;
        std::vector<Acc> parts(static_cast<std::size_t>(nchunks));
        const int M = cfg.M;
        const double npairs = 0.5 * M * (M - 1);

        core::parallel_for(
            static_cast<std::size_t>(nchunks),
            [&](std::size_t c)
            {
                Acc a;
                const std::int64_t lo = static_cast<std::int64_t>(c) * chunk;
                const std::int64_t hi = std::min(cfg.trials, lo + chunk);
                for (std::int64_t k = lo; k < hi; ++k)
                {
                    std::mt19937_64 rng = trial_rng(cfg.seed, static_cast<std::uint64_t>(k));
                    const BlockState b = simulate_block(cfg, rng);
                    const ChannelEstimate est = lmmse_channel_estimate(b, cfg);
                    const Detection d = lmmse_detect(b, est, cfg);

                    const double e = std::norm(b.X(cfg.substage_m - 1, cfg.stage_t - 1) - d.xhat) / cfg.sig.P;
                    const double dg = est.Xi.diagonal().real().mean();
                    double oa = 0.0;
                    cd os = 0.0;
                    for (int j = 1; j < M; ++j)
                        for (int i = 0; i < j; ++i)
                        {
                            oa += std::abs(est.Xi(i, j));
                            os += est.Xi(i, j);
                        }
                    if (npairs > 0)
                    {
                        oa /= npairs;
                        os /= npairs;
                    }
                    a.n += 1;
                    a.mse += e;
                    a.mse2 += e * e;
                    a.dg += dg;
                    a.dg2 += dg * dg;
                    a.oa += oa;
                    a.oa2 += oa * oa;
                    a.ore += os.real();
                    a.ore2 += os.real() * os.real();
                    a.oim += os.imag();
                    a.oim2 += os.imag() * os.imag();
                }
                parts[c] = a;
            },
            cfg.threads);

        Acc t;
        for (const Acc &a : parts)
            t.merge(a);

        McResult r;
        r.trials = cfg.trials;
        r.normalized_mse = finish(t.mse, t.mse2, t.n);
        r.xi2_empirical = finish(t.dg, t.dg2, t.n);
        r.offdiag_abs_mean = finish(t.oa, t.oa2, t.n);
        const Stat re = finish(t.ore, t.ore2, t.n), im = finish(t.oim, t.oim2, t.n);
        r.offdiag_mean_abs.mean = std::hypot(re.mean, im.mean);
        r.offdiag_mean_abs.stderr_ = std::hypot(re.stderr_, im.stderr_);
        const double s = std::pow(static_cast<double>(M), 0.75);
        r.offdiag_scaled = s * r.offdiag_mean_abs.mean;
        r.offdiag_abs_scaled = s * r.offdiag_abs_mean.mean;
        r.prediction = predict(cfg);
        return r;
    }

    McConfig scaling_config(const ScalingPlan &plan, int M)
    {
        McConfig c;
        c.M = M;
        c.N = std::max(1, static_cast<int>(std::lround(M / plan.alpha)));
        c.T_c = std::max(2, static_cast<int>(std::lround(plan.tc_per_M * M)));
        c.T_tr = std::max(0, static_cast<int>(std::lround(plan.ttr_per_M * M)));
        c.stage_t = std::max(c.T_tr + 1, static_cast<int>(std::lround(plan.t_per_M * M)) + 1);
        c.substage_m = 1;
        c.N0 = plan.N0;
        c.sig = plan.sig;
        c.trials = plan.trials;
        c.seed = plan.seed;
        c.threads = plan.threads;
        return c;
    }

    void trend(const std::vector<double> &x, const std::vector<double> &y, const std::vector<double> &se,
               double &slope, double &slope_se)
    {
        const std::size_t n = x.size();
        require(n >= 2 && y.size() == n && se.size() == n, ErrorKind::InvalidDomain, "trend needs >= 2 points");
        double xm = 0.0;
        for (double v : x)
            xm += v;
        xm /= n;
        double sxx = 0.0;
        for (double v : x)
            sxx += (v - xm) * (v - xm);
        slope = 0.0;
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            const double w = (x[i] - xm) / sxx;
            slope += w * y[i];
            var += w * w * se[i] * se[i];
        }
        slope_se = std::sqrt(var);
    }

    ScalingStudy offdiag_scaling_study(const ScalingPlan &plan)
    {
        require(plan.Ms.size() >= 2, ErrorKind::InvalidConfig, "scaling study needs at least two sizes");
        ScalingStudy s;
        std::vector<double> x, y, se;
        for (int M : plan.Ms)
        {
            const McResult r = measure_mse(scaling_config(plan, M));
            s.rows.push_back({M, r});
            x.push_back(std::log2(static_cast<double>(M)));
            y.push_back(r.offdiag_scaled);
            se.push_back(std::pow(static_cast<double>(M), 0.75) * r.offdiag_mean_abs.stderr_);
        }
        trend(x, y, se, s.trend_slope, s.trend_slope_stderr);
        s.scaled_bounded = s.trend_slope <= 2.0 * s.trend_slope_stderr;
        s.abs_mean_decreasing = true;
        for (std::size_t i = 1; i < s.rows.size(); ++i)
            if (!(s.rows[i].result.offdiag_abs_mean.mean < s.rows[i - 1].result.offdiag_abs_mean.mean))
                s.abs_mean_decreasing = false;
        return s;
    }
}

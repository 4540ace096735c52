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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sdmimo/sim/simulator.hpp"

#include <cmath>

using namespace sdmimo;
using namespace sdmimo::sim;
using core::Family;

namespace
{
    McConfig small(int M, int N, int Tc, int Ttr, int t, int m)
    {
        McConfig c;
        c.M = M;
        c.N = N;
        c.T_c = Tc;
        c.T_tr = Ttr;
        c.stage_t = t;
        c.substage_m = m;
        return c;
    }

    struct Acc
    {
        double s = 0, s2 = 0;
        long n = 0;
        void add(double x)
        {
            s += x;
            s2 += x * x;
            ++n;
        }
        double mean() const { return s / n; }
        double se() const { return std::sqrt(std::max(0.0, s2 / n - mean() * mean()) / n); }
    };
}

TEST_CASE("noiseless block")
{
    McConfig c = small(1, 1, 1, 0, 1, 1);
    c.N0 = 0.0;
    validate(c, true);
    CHECK_THROWS_AS(validate(c), Error);
    auto rng = trial_rng(5, 0);
    const auto b = simulate_block(c, rng);
    CHECK(b.Y(0, 0) == b.H(0, 0) * b.X(0, 0));

    McConfig c4 = small(4, 3, 6, 2, 3, 1);
    c4.N0 = 0.0;
    auto r4 = trial_rng(5, 1);
    const auto b4 = simulate_block(c4, r4);
    CHECK((b4.Y - b4.H * b4.X / 2.0).norm() < 1e-14);
    for (int t = 0; t < 2; ++t)
        for (int i = 0; i < 4; ++i)
            CHECK(std::norm(b4.X(i, t)) == doctest::Approx(1.0));
}

TEST_CASE("channel entries have unit variance")
{
    Acc a;
    McConfig c = small(4, 5, 4, 0, 1, 1);
    for (int k = 0; k < 5000; ++k)
    {
        auto rng = trial_rng(3, k);
        const auto b = simulate_block(c, rng);
        for (int i = 0; i < b.H.size(); ++i)
            a.add(std::norm(b.H.data()[i]));
    }
    CHECK(a.n == 100000);
    CHECK(std::fabs(a.mean() - 1.0) < 3 * a.se());
}

TEST_CASE("determinism")
{
    McConfig c = small(3, 2, 8, 3, 5, 2);
    c.sig = {Family::QpskBiased, 1.0, 0.2};
    auto r1 = trial_rng(42, 7), r2 = trial_rng(42, 7), r3 = trial_rng(42, 8);
    const auto a = simulate_block(c, r1), b = simulate_block(c, r2), d = simulate_block(c, r3);
    CHECK(a.Y == b.Y);
    CHECK(a.Theta == b.Theta);
    CHECK(a.Y != d.Y);

    c.trials = 1;
    CHECK(measure_mse(c).normalized_mse.mean == measure_mse(c).normalized_mse.mean);

    c.trials = 700;
    c.threads = 1;
    const auto s = measure_mse(c);
    c.threads = 4;
    const auto p = measure_mse(c);
    CHECK(s.normalized_mse.mean == p.normalized_mse.mean);
    CHECK(s.normalized_mse.stderr_ == p.normalized_mse.stderr_);
    CHECK(s.xi2_empirical.mean == p.xi2_empirical.mean);
    CHECK(s.offdiag_scaled == p.offdiag_scaled);
}

TEST_CASE("no observations leave the prior")
{
    McConfig c = small(4, 4, 8, 0, 1, 1);
    auto rng = trial_rng(1, 0);
    const auto b = simulate_block(c, rng);
    const auto e = lmmse_channel_estimate(b, c);
    CHECK((e.Xi - Eigen::MatrixXcd::Identity(4, 4)).norm() == 0.0);
    CHECK(e.Hhat.norm() == 0.0);
}

TEST_CASE("single pilot column, Sherman-Morrison")
{
    McConfig c = small(2, 3, 2, 1, 2, 1);
    c.N0 = 0.7;
    auto rng = trial_rng(9, 0);
    const auto b = simulate_block(c, rng);
    const auto e = lmmse_channel_estimate(b, c);
    const Eigen::VectorXcd x = b.X.col(0);
    const double k = 1.0 / (2 * c.N0);
    const Eigen::MatrixXcd ref = Eigen::MatrixXcd::Identity(2, 2) - x * x.adjoint() * k / (1.0 + k * x.squaredNorm());
    CHECK((e.Xi - ref).norm() < 1e-14);
    const Eigen::MatrixXcd href = b.Y.col(0) * x.adjoint() / (std::sqrt(2.0) * c.N0) * ref;
    CHECK((e.Hhat - href).norm() < 1e-13);
}

TEST_CASE("error covariance matches the estimation error, errors are orthogonal")
{
    McConfig c = small(3, 4, 12, 3, 7, 1);
    c.N0 = 0.5;
    c.sig = {Family::GaussianBiased, 1.0, 0.3};
    const int M = c.M, N = c.N;
    std::vector<Acc> diff(M * M), orth(2 * N * M);
    for (int k = 0; k < 10000; ++k)
    {
        auto rng = trial_rng(21, k);
        const auto b = simulate_block(c, rng);
        const auto e = lmmse_channel_estimate(b, c);
        const Eigen::MatrixXcd E = b.H - e.Hhat;
        const Eigen::MatrixXcd D = E.adjoint() * E / N - e.Xi;
        for (int i = 0; i < M * M; ++i)
            diff[i].add(D.data()[i].real());
        for (int i = 0; i < N * M; ++i)
        {
            const auto p = std::conj(e.Hhat.data()[i]) * E.data()[i];
            orth[2 * i].add(p.real());
            orth[2 * i + 1].add(p.imag());
        }
        // Hermitian with spectrum in (0, 1]
        CHECK_MESSAGE((e.Xi - e.Xi.adjoint()).norm() == 0.0, "trial ", k);
    }
    int bad = 0;
    for (const auto &a : diff)
        bad += std::fabs(a.mean()) > 3.5 * a.se();
    for (const auto &a : orth)
        bad += std::fabs(a.mean()) > 3.5 * a.se();
    // at most a couple of 3.5-sigma excursions among 57 statistics
    CHECK(bad <= 2);
}

TEST_CASE("spectrum of Xi")
{
    McConfig c = small(6, 4, 20, 6, 11, 1);
    for (int k = 0; k < 50; ++k)
    {
        auto rng = trial_rng(4, k);
        const auto b = simulate_block(c, rng);
        const auto e = lmmse_channel_estimate(b, c);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(e.Xi);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
        CHECK(es.eigenvalues().maxCoeff() <= 1.0 + 1e-12);
    }
}

TEST_CASE("scalar Wiener filter")
{
    McConfig c = small(1, 1, 4, 1, 3, 1);
    c.N0 = 0.4;
    c.sig = {Family::GaussianUnbiased, 2.0, 0.0};
    auto rng = trial_rng(2, 3);
    const auto b = simulate_block(c, rng);
    const auto e = lmmse_channel_estimate(b, c);
    const auto d = lmmse_detect(b, e, c);
    const double P = 2.0;
    const cd h = e.Hhat(0, 0);
    const double zeta = P * e.Xi(0, 0).real();
    const cd ref = P * std::conj(h) * b.Y(0, 2) / (P * std::norm(h) + c.N0 + zeta);
    CHECK(std::abs(d.xhat - ref) < 1e-13);
    CHECK(d.zeta == doctest::Approx(zeta));
    CHECK(d.posterior_var == doctest::Approx(P * (c.N0 + zeta) / (P * std::norm(h) + c.N0 + zeta)));
}

TEST_CASE("detector limits")
{
    // perfect CSI, vanishing noise
    McConfig c = small(4, 4, 2, 0, 1, 1);
    c.N0 = 1e-12;
    auto rng = trial_rng(8, 0);
    const auto b = simulate_block(c, rng);
    const ChannelEstimate pe{b.H, Eigen::MatrixXcd::Zero(4, 4)};
    CHECK(std::abs(lmmse_detect(b, pe, c).xhat - b.X(0, 0)) < 1e-4);

    // observation equal to its model mean returns the prior mean
    McConfig cb = small(4, 4, 10, 4, 6, 2);
    cb.sig = {Family::QpskBiased, 1.0, 0.3};
    auto r2 = trial_rng(8, 1);
    auto bb = simulate_block(cb, r2);
    const auto e = lmmse_channel_estimate(bb, cb);
    Eigen::VectorXcd x = bb.Theta.col(5);
    x(0) = bb.X(0, 5);
    bb.Y.col(5) = e.Hhat * x / 2.0;
    const auto d = lmmse_detect(bb, e, cb);
    CHECK(std::abs(d.xhat - bb.Theta(1, 5)) < 1e-12);
}

TEST_CASE("measure_mse sanity")
{
    McConfig c = small(4, 4, 16, 4, 9, 2);
    c.trials = 400;
    for (double db : {-30.0, 0.0, 10.0, 20.0})
    {
        c.N0 = std::pow(10.0, -db / 10);
        const auto r = measure_mse(c);
        CHECK(r.trials == 400);
        CHECK(r.normalized_mse.mean >= 0.0);
        CHECK(r.normalized_mse.mean <= 1.0 + 5 * r.normalized_mse.stderr_);
        CHECK(r.xi2_empirical.mean > 0.0);
        CHECK(r.xi2_empirical.mean < 1.0);
        if (db == -30.0)
            CHECK(r.normalized_mse.mean == doctest::Approx(1.0).epsilon(0.05));
        CHECK(r.prediction.beta == 0.25);
        CHECK(r.prediction.tau == 0.5);
        CHECK(r.prediction.mu == 0.25);
    }
    McConfig bad = c;
    bad.stage_t = 4;
    CHECK_THROWS_AS(measure_mse(bad), Error);
    bad = c;
    bad.substage_m = 5;
    CHECK_THROWS_AS(measure_mse(bad), Error);
}

TEST_CASE("scaling study shape")
{
    ScalingPlan p;
    p.Ms = {4, 8};
    p.trials = 300;
    const auto s = offdiag_scaling_study(p);
    REQUIRE(s.rows.size() == 2);
    const auto c = scaling_config(p, 8);
    CHECK(c.N == 8);
    CHECK(c.T_c == 32);
    CHECK(c.T_tr == 0);
    CHECK(c.stage_t == 17);
    CHECK(s.rows[1].result.offdiag_abs_mean.mean < s.rows[0].result.offdiag_abs_mean.mean);

    double slope, se;
    trend({0, 1, 2}, {1, 3, 5}, {1, 1, 1}, slope, se);
    CHECK(slope == doctest::Approx(2.0));
}

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

#include "sdmimo/core/awgn.hpp"
#include "sdmimo/core/quadrature.hpp"
#include "sdmimo/core/signaling.hpp"
#include "qpsk_oracle.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace sdmimo;
using namespace sdmimo::core;

namespace
{
    Signaling gauss(double P = 1.0) { return {Family::GaussianUnbiased, P, 0.0}; }
    Signaling qpsk(double P = 1.0) { return {Family::QpskUnbiased, P, 0.0}; }

    double mi_nats(const Signaling &s, double a, double sig2, std::complex<double> th = {})
    {
        return awgn_mutual_info(s, {a, sig2, th}) / std::numbers::log2e;
    }
}

TEST_CASE("awgn_mmse examples")
{
    CHECK(awgn_mmse(gauss(), {0.0, 1.0, {}}) == doctest::Approx(1.0).epsilon(1e-15));
    const Signaling gb{Family::GaussianBiased, 1.0, 0.25};
    CHECK(awgn_mmse(gb, {1.0, 0.5, {0.5, 0.0}}) == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(awgn_mmse(qpsk(), {0.0, 1.0, {}}) == doctest::Approx(1.0).epsilon(1e-12));

    // no-information limit
    for (const auto &s : {gauss(), qpsk()})
        CHECK(awgn_mmse(s, {1.0, 1e9, {}}) == doctest::Approx(1.0).epsilon(1e-6));
    const Signaling qb{Family::QpskBiased, 1.0, 0.25};
    CHECK(awgn_mmse(qb, {1.0, 1e9, {0.5, 0.0}}) == doctest::Approx(0.75).epsilon(1e-6));
}

TEST_CASE("awgn_mutual_info examples")
{
    CHECK(awgn_mutual_info(gauss(), {1.0, 1.0, {}}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(awgn_mutual_info(qpsk(), {0.0, 1.0, {}}) == doctest::Approx(0.0));
    CHECK(awgn_mutual_info(qpsk(), {1.0, 1e-6, {}}) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("QPSK kernel against a sampled oracle")
{
    // unit gain, unit noise
    const auto mc = sdmimo_testing::qpsk_mc(1.0, 1.0, 1.0, {}, 1'000'000, 11);
    const auto q = awgn_measures(qpsk(), {1.0, 1.0, {}});
    CHECK(std::fabs(q.mmse - mc.mmse) < 3.0 * mc.mmse_se);
    CHECK(std::fabs(q.mi_bits - mc.mi_bits) < 3.0 * mc.mi_se);

    // snr 10, MI within 1e-2
    const auto mc10 = sdmimo_testing::qpsk_mc(1.0, std::sqrt(10.0), 1.0, {}, 200'000, 12);
    CHECK(std::fabs(awgn_mutual_info(qpsk(), {std::sqrt(10.0), 1.0, {}}) - mc10.mi_bits) < 1e-2);

    // biased prior, both atoms of the two-point hyperprior
    const Signaling qb{Family::QpskBiased, 1.0, 0.2};
    for (double sgn : {1.0, -1.0})
    {
        const std::complex<double> th{sgn * std::sqrt(0.2), 0.0};
        const auto b = awgn_measures(qb, {0.8, 0.6, th});
        const auto mb = sdmimo_testing::qpsk_mc(1.0, 0.8, 0.6, th, 1'000'000, 13);
        CHECK(std::fabs(b.mmse - mb.mmse) < 3.0 * mb.mmse_se);
        CHECK(std::fabs(b.mi_bits - mb.mi_bits) < 3.0 * mb.mi_se);
    }
}

TEST_CASE("I-MMSE relation by finite differences")
{
    const Signaling qb{Family::QpskBiased, 1.0, 0.3};
    const Signaling gb{Family::GaussianBiased, 1.0, 0.3};
    const std::complex<double> th{std::sqrt(0.3), 0.0};
    for (double snr_db = -10.0; snr_db <= 25.0; snr_db += 5.0)
    {
        const double g = std::pow(10.0, snr_db / 10.0);
        const double h = 1e-4 * g;
        for (const auto &[s, t] : {std::pair{gauss(), std::complex<double>{}}, std::pair{qpsk(), std::complex<double>{}},
                                   std::pair{qb, th}, std::pair{gb, th}})
        {
            // gamma = a^2 / sigma^2 with sigma^2 = 1
            const double d = (mi_nats(s, std::sqrt(g + h), 1.0, t) - mi_nats(s, std::sqrt(g - h), 1.0, t)) / (2 * h);
            const double mmse = awgn_mmse(s, {std::sqrt(g), 1.0, t});
            CHECK(std::fabs(d - mmse) < 1e-3);
        }
    }
}

TEST_CASE("MMSE monotone and bounded on random grids")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Signaling qb{Family::QpskBiased, 2.0, 0.5};
    for (int i = 0; i < 200; ++i)
    {
        const double a = 3.0 * u(rng), s2 = 0.01 + 3.0 * u(rng);
        const std::complex<double> th{u(rng) < 0.5 ? 0.5 * std::sqrt(2.0) : -0.5 * std::sqrt(2.0), 0.0};
        for (const auto &[s, t] : {std::pair{gauss(2.0), std::complex<double>{}},
                                   std::pair{qpsk(2.0), std::complex<double>{}}, std::pair{qb, th}})
        {
            const double var = s.P - std::norm(t);
            const double m0 = awgn_mmse(s, {a, s2, t});
            CHECK(m0 >= 0.0);
            CHECK(m0 <= var * (1 + 1e-12));
            CHECK(awgn_mmse(s, {a * 1.1 + 0.01, s2, t}) <= m0 + 1e-12);
            CHECK(awgn_mmse(s, {a, s2 * 1.1, t}) >= m0 - 1e-12);
            const double mi = awgn_mutual_info(s, {a, s2, t});
            CHECK(mi >= 0.0);
            if (is_qpsk(s.family))
                CHECK(mi <= 2.0 + 1e-12);
        }
    }
}

TEST_CASE("domain errors")
{
    const Signaling gb{Family::GaussianBiased, 1.0, 0.25};
    CHECK_THROWS_AS(awgn_mmse(gb, {1.0, 1.0, {1.0, 0.0}}), Error);
    CHECK_THROWS_AS(awgn_mmse(gauss(), {-1.0, 1.0, {}}), Error);
    CHECK_THROWS_AS(awgn_mmse(gauss(), {1.0, 0.0, {}}), Error);
    try
    {
        validate(Signaling{Family::QpskBiased, 1.0, 0.6});
        FAIL("expected an error");
    }
    catch (const Error &e)
    {
        CHECK(e.kind() == ErrorKind::InvalidDomain);
    }
    CHECK_THROWS_AS(validate(Signaling{Family::GaussianBiased, 1.0, 1.0}), Error);
    CHECK_NOTHROW(validate(Signaling{Family::QpskBiased, 1.0, 0.5}));
    CHECK_NOTHROW(validate(Signaling{Family::GaussianUnbiased, 1.0, 0.0}));
}

TEST_CASE("kl_gauss")
{
    CHECK(kl_gauss(1.0, 1.0) == doctest::Approx(0.0));
    CHECK(kl_gauss(1.0, 2.0) == doctest::Approx(1.0 - 0.5 * std::numbers::log2e).epsilon(1e-14));
    CHECK(kl_gauss(1.0, 2.0) == doctest::Approx(0.27865).epsilon(1e-4));
    CHECK(kl_gauss(2.0, 1.0) == doctest::Approx(0.44270).epsilon(1e-4));
    CHECK_THROWS_AS(kl_gauss(0.0, 1.0), Error);
}

TEST_CASE("hyperprior_expect")
{
    const Signaling unb = gauss();
    CHECK(hyperprior_expect(unb, [](std::complex<double> t) { return 3.0 + t.real(); }) == 3.0);
    const Signaling tp{Family::GaussianBiased, 1.0, 0.25};
    CHECK(hyperprior_expect(tp, [](std::complex<double> t) { return std::norm(t); }) == doctest::Approx(0.25));
    CHECK(hyperprior_expect(tp, [](std::complex<double> t) { return t.real(); }) == doctest::Approx(0.0));

    const Signaling fm{Family::GaussianBiased, 1.0, 0.25, Hyperprior::FixedMagnitude};
    CHECK(hyperprior_expect(fm, [](std::complex<double> t) { return std::norm(t); }, ThetaDependence::MagnitudeOnly) ==
          doctest::Approx(0.25));
    try
    {
        hyperprior_expect(fm, [](std::complex<double> t) { return t.real(); });
        FAIL("expected an error");
    }
    catch (const Error &e)
    {
        CHECK(e.kind() == ErrorKind::UnsupportedHyperprior);
    }
}

TEST_CASE("quadrature rules")
{
    const Rule l2 = gauss_legendre_unit(2);
    CHECK(l2.nodes[0] == doctest::Approx(0.5 - 1.0 / (2.0 * std::sqrt(3.0))).epsilon(1e-15));
    CHECK(l2.nodes[1] == doctest::Approx(0.5 + 1.0 / (2.0 * std::sqrt(3.0))).epsilon(1e-15));
    CHECK(l2.weights[0] == doctest::Approx(0.5));
    CHECK(l2.weights[1] == doctest::Approx(0.5));

    for (int n : {2, 8, 32, 96})
    {
        const Rule h = gauss_hermite(n);
        double s0 = 0, s1 = 0, s2 = 0, s4 = 0;
        for (int i = 0; i < n; ++i)
        {
            const double z = h.nodes[i], w = h.weights[i];
            s0 += w;
            s1 += w * z;
            s2 += w * z * z;
            s4 += w * z * z * z * z;
        }
        CHECK(std::fabs(s0 - 1.0) < 1e-12);
        CHECK(std::fabs(s1) < 1e-12);
        CHECK(std::fabs(s2 - 1.0) < 1e-12);
        if (n >= 3)
            CHECK(std::fabs(s4 - 3.0) < 1e-11);

        const Rule l = gauss_legendre_unit(n);
        double w0 = 0, w1 = 0;
        for (int i = 0; i < n; ++i)
        {
            w0 += l.weights[i];
            w1 += l.weights[i] * l.nodes[i];
        }
        CHECK(std::fabs(w0 - 1.0) < 1e-12);
        CHECK(std::fabs(w1 - 0.5) < 1e-12);
    }

    QuadratureConfig bad;
    bad.hermite_nodes = 1;
    CHECK_THROWS_AS(validate(bad), Error);
    const auto r = quadrature_rules({});
    CHECK(r.hermite.nodes.size() == 96);
    CHECK(r.legendre_tau.nodes.size() == 32);
}

TEST_CASE("LLR integrator against dense integration")
{
    // trapezoid on a wide fine grid as reference
    auto ref = [](double m, double v)
    {
        const double sd = std::sqrt(v);
        const int n = 400000;
        const double lo = m - 12 * sd, hi = m + 12 * sd, h = (hi - lo) / n;
        double t = 0, s = 0;
        for (int i = 0; i <= n; ++i)
        {
            const double u = lo + i * h;
            const double w = (i == 0 || i == n ? 0.5 : 1.0) * h * normal_pdf((u - m) / sd) / sd;
            t += w * 2.0 / (1.0 + std::exp(2.0 * u));
            s += w * (u < 0 ? -2.0 * u + std::log1p(std::exp(2.0 * u)) : std::log1p(std::exp(-2.0 * u)));
        }
        return std::pair{t, s};
    };
    const LlrIntegrator &integ = LlrIntegrator::standard();
    for (double g : {0.01, 0.3, 1.0, 4.0, 30.0, 300.0})
        for (double lam : {0.0, 0.8})
        {
            const auto e = integ.expect(g + lam, g);
            const auto [t, s] = ref(g + lam, g);
            CHECK(std::fabs(e.tail - t) < 1e-9);
            CHECK(std::fabs(e.softplus - s) < 1e-9);
        }
}

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

#include "sdmimo/cli/run.hpp"
#include "sdmimo/bounds/sweep.hpp"
#include "sdmimo/kernels/logistic.hpp"
#include "sdmimo/sim/simulator.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#ifndef SDMIMO_VERSION
#define SDMIMO_VERSION "0.0.0"
#endif

namespace sdmimo::cli
{
    namespace
    {
        using bounds::Cell;
        using bounds::Table;
        using KV = std::vector<std::pair<std::string, std::string>>;

        struct Output
        {
            std::string command;
            KV config;
            Table table;
            KV summary;
        };

        struct Opts
        {
            std::string preset;
            std::string format = "csv";
            std::string output;
            unsigned threads = 0;

            double alpha = 1.0, beta = 0.5, tau0 = 0.0, P = 1.0, sigma_theta2 = 0.0;
            std::string signaling = "gauss";
            std::string hyperprior = "two-point";
            std::vector<double> snr_db;
            std::string snr_range;

            int hermite = 96, leg_tau = 32, leg_mu = 32, scan = 400;

            std::vector<double> tau, mu;

            std::string hh_power = "optimized";
            std::optional<double> hh_tau0;

            std::vector<double> beta_over_alpha{1.0};
            double s_min = 1e-3, s_max = 10.0;
            int points = 200;

            std::vector<double> snr_pair{40.0, 60.0};

            std::vector<double> betas, sigma_list;
            std::vector<std::string> families;
            bool with_hh = false;

            int M = 8, N = 8, Tc = 128, Ttr = -1, m = 3;
            std::vector<int> t{17};
            std::int64_t trials = 2000;
            std::uint64_t seed = 1;

            std::vector<int> Ms{4, 8, 16, 32};
            double tc_per_M = 4.0, ttr_per_M = 0.0, t_per_M = 2.0;
        };

        [[noreturn]] void config_error(const std::string &w) { fail(ErrorKind::InvalidConfig, w); }

        std::string num(double x)
        {
            if (std::isnan(x))
                return "nan";
            if (std::isinf(x))
                return x > 0 ? "inf" : "-inf";
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.12g", x);
            return buf;
        }

        std::string join(const std::vector<double> &v)
        {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i)
                s += (i ? "," : "") + num(v[i]);
            return s;
        }

        template <class T>
        std::string join_any(const std::vector<T> &v)
        {
            std::ostringstream os;
            for (std::size_t i = 0; i < v.size(); ++i)
                os << (i ? "," : "") << v[i];
            return os.str();
        }

        core::Family parse_family(const std::string &name, double s2)
        {
            if (name == "gauss" || name == "gaussian")
                return s2 > 0.0 ? core::Family::GaussianBiased : core::Family::GaussianUnbiased;
            if (name == "qpsk")
                return s2 > 0.0 ? core::Family::QpskBiased : core::Family::QpskUnbiased;
            if (name == "gauss-biased")
                return core::Family::GaussianBiased;
            if (name == "qpsk-biased")
                return core::Family::QpskBiased;
            config_error("unknown signaling '" + name + "' (gauss, qpsk, gauss-biased, qpsk-biased)");
        }

        core::Hyperprior parse_hyperprior(const std::string &name)
        {
            if (name == "two-point")
                return core::Hyperprior::TwoPointReal;
            if (name == "fixed-magnitude")
                return core::Hyperprior::FixedMagnitude;
            config_error("unknown hyperprior '" + name + "' (two-point, fixed-magnitude)");
        }

        std::vector<double> parse_range(const std::string &text)
        {
            // start:stop:step, inclusive of stop up to rounding
            double a, b, st;
            char c1, c2;
            std::istringstream is(text);
            if (!(is >> a >> c1 >> b >> c2 >> st) || c1 != ':' || c2 != ':' || !(is >> std::ws).eof())
                config_error("range must be start:stop:step (got '" + text + "')");
            if (!(st > 0.0) || b < a || !std::isfinite(a) || !std::isfinite(b))
                config_error("range needs step > 0 and start <= stop");
            const long n = std::lround(std::floor((b - a) / st + 1e-9)) + 1;
            if (n > 100000)
                config_error("range has too many points");
            std::vector<double> v;
            for (long i = 0; i < n; ++i)
                v.push_back(a + st * i);
            return v;
        }

        std::vector<double> snr_axis(const Opts &o, std::vector<double> fallback)
        {
            std::vector<double> v = o.snr_db;
            if (!o.snr_range.empty())
            {
                if (!v.empty())
                    config_error("use either --snr-db or --snr-range");
                v = parse_range(o.snr_range);
            }
            if (v.empty())
                v = std::move(fallback);
            for (std::size_t i = 0; i < v.size(); ++i)
            {
                if (!std::isfinite(v[i]))
                    config_error("SNR values must be finite");
                if (i > 0 && !(v[i] > v[i - 1]))
                    config_error("SNR axis must be strictly increasing");
            }
            return v;
        }

        double n0_of(double P, double snr_db) { return P / std::pow(10.0, snr_db / 10.0); }

        core::QuadratureConfig quad_of(const Opts &o)
        {
            core::QuadratureConfig q;
            q.hermite_nodes = o.hermite;
            q.legendre_nodes_tau = o.leg_tau;
            q.legendre_nodes_mu = o.leg_mu;
            try
            {
                core::validate(q);
            }
            catch (const Error &e)
            {
                config_error(e.detail());
            }
            if (o.scan < 2)
                config_error("--scan-points must be >= 2");
            return q;
        }

        void common_config(const Opts &o, KV &kv)
        {
            kv.push_back({"alpha", num(o.alpha)});
            kv.push_back({"beta", num(o.beta)});
            kv.push_back({"tau0", num(o.tau0)});
            kv.push_back({"power", num(o.P)});
            kv.push_back({"signaling", o.signaling});
            kv.push_back({"sigma_theta2", num(o.sigma_theta2)});
            kv.push_back({"hyperprior", o.hyperprior});
            kv.push_back({"hermite_nodes", std::to_string(o.hermite)});
            kv.push_back({"legendre_nodes_tau", std::to_string(o.leg_tau)});
            kv.push_back({"legendre_nodes_mu", std::to_string(o.leg_mu)});
            kv.push_back({"scan_points", std::to_string(o.scan)});
        }

        // Domain problems in user-supplied parameters are configuration errors.
        template <class F>
        auto checked(F &&f)
        {
            try
            {
                return f();
            }
            catch (const Error &e)
            {
                if (e.kind() == ErrorKind::InvalidDomain || e.kind() == ErrorKind::UnsupportedHyperprior)
                    fail(ErrorKind::InvalidConfig, e.detail());
                throw;
            }
        }

        replica::Geometry geom_of(const Opts &o)
        {
            const replica::Geometry g{o.alpha, o.beta, o.tau0};
            checked([&] { replica::validate(g); return 0; });
            return g;
        }

        core::Signaling sig_of(const Opts &o)
        {
            core::Signaling s{parse_family(o.signaling, o.sigma_theta2), o.P, o.sigma_theta2,
                              parse_hyperprior(o.hyperprior)};
            checked([&] { core::validate(s); return 0; });
            return s;
        }

        replica::DetectorOptions det_of(const Opts &o)
        {
            replica::DetectorOptions d;
            d.scan_points = o.scan;
            return d;
        }

        Output cmd_estimator(const Opts &o)
        {
            Output out{"estimator", {}, {}, {}};
            const auto g = geom_of(o);
            const auto sig = sig_of(o);
            const auto snr = snr_axis(o, {6.0});
            const std::vector<double> taus = o.tau.empty() ? std::vector<double>{1.0} : o.tau;
            common_config(o, out.config);
            out.config.push_back({"snr_db", join(snr)});
            out.config.push_back({"tau", join(taus)});
            for (double x : taus)
                if (!(x >= g.tau0 && x <= 1.0))
                    config_error("tau values must lie in [tau0, 1]");

            out.table.columns = {"snr_db", "tau", "xi2", "sigma_tr2", "sigma_c2"};
            for (double s : snr)
                for (double tau : taus)
                {
                    const auto e = replica::solve_estimator(g, sig, n0_of(o.P, s), tau);
                    out.table.rows.push_back({s, tau, e.xi2, e.sigma_tr2, e.sigma_c2});
                }
            return out;
        }

        Output cmd_detector(const Opts &o)
        {
            Output out{"detector", {}, {}, {}};
            const auto g = geom_of(o);
            const auto sig = sig_of(o);
            quad_of(o);
            const auto snr = snr_axis(o, {6.0});
            const std::vector<double> taus = o.tau.empty() ? std::vector<double>{1.0} : o.tau;
            const std::vector<double> mus = o.mu.empty() ? std::vector<double>{0.0} : o.mu;
            common_config(o, out.config);
            out.config.push_back({"snr_db", join(snr)});
            out.config.push_back({"tau", join(taus)});
            out.config.push_back({"mu", join(mus)});
            for (double x : taus)
                if (!(x >= g.tau0 && x <= 1.0))
                    config_error("tau values must lie in [tau0, 1]");
            for (double x : mus)
                if (!(x >= 0.0 && x <= 1.0))
                    config_error("mu values must lie in [0, 1]");

            const core::LlrIntegrator integ(o.hermite);
            out.table.columns = {"snr_db", "tau", "mu", "xi2", "sigma2", "free_energy", "n_candidates", "candidates"};
            for (double s : snr)
                for (double tau : taus)
                {
                    const double N0 = n0_of(o.P, s);
                    const auto e = replica::solve_estimator(g, sig, N0, tau);
                    const replica::DetectorScan scan(g, sig, N0, e, det_of(o), integ);
                    for (double mu : mus)
                    {
                        const auto d = scan.solve(mu);
                        std::string cands;
                        for (std::size_t i = 0; i < d.candidates.size(); ++i)
                            cands += (i ? ";" : "") + num(d.candidates[i].sigma2) + ":" +
                                     num(d.candidates[i].free_energy);
                        out.table.rows.push_back({s, tau, mu, e.xi2, d.sigma2,
                                                  d.candidates[d.selected_index].free_energy,
                                                  static_cast<std::int64_t>(d.candidates.size()), cands});
                    }
                }
            return out;
        }

        Output cmd_rate(const Opts &o)
        {
            Output out{"rate", {}, {}, {}};
            const auto g = geom_of(o);
            const auto sig = sig_of(o);
            const auto q = quad_of(o);
            const auto snr = snr_axis(o, {6.0});
            common_config(o, out.config);
            out.config.push_back({"snr_db", join(snr)});

            bounds::RateOptions ro;
            ro.detector = det_of(o);
            ro.threads = o.threads;
            out.table.columns = {"snr_db", "signaling", "sigma_theta2", "rate_bits", "ceiling_bits", "tau_nodes",
                                 "mu_nodes"};
            for (double s : snr)
            {
                const double N0 = n0_of(o.P, s);
                const auto r = bounds::achievable_rate(g, sig, N0, q, ro);
                out.table.rows.push_back({s, std::string(core::to_string(sig.family)), sig.sigma_theta2,
                                          r.rate_bits_per_tx, bounds::rate_ceiling(g, sig, N0),
                                          static_cast<std::int64_t>(r.tau_nodes),
                                          static_cast<std::int64_t>(r.mu_nodes)});
            }
            return out;
        }

        bounds::HhOptions hh_of(const Opts &o)
        {
            bounds::HhOptions h;
            h.tau0 = o.hh_tau0;
            if (o.hh_power == "optimized")
                h.power = bounds::HhPower::Optimized;
            else if (o.hh_power == "equal")
                h.power = bounds::HhPower::Equal;
            else
                config_error("unknown --hh-power '" + o.hh_power + "' (optimized, equal)");
            return h;
        }

        Output cmd_hh(const Opts &o)
        {
            Output out{"hh", {}, {}, {}};
            const auto g = geom_of(o);
            const auto h = hh_of(o);
            const auto snr = snr_axis(o, {6.0});
            const double t0 = h.tau0.value_or(g.beta);
            out.config.push_back({"alpha", num(o.alpha)});
            out.config.push_back({"beta", num(o.beta)});
            out.config.push_back({"power", num(o.P)});
            out.config.push_back({"hh_tau0", num(t0)});
            out.config.push_back({"hh_power", o.hh_power});
            out.config.push_back({"snr_db", join(snr)});
            out.table.columns = {"snr_db", "tau0", "power_mode", "hh_bits"};
            for (double s : snr)
            {
                const double v = checked([&] { return bounds::hh_bound(g, o.P, n0_of(o.P, s), h); });
                out.table.rows.push_back({s, t0, o.hh_power, v});
            }
            return out;
        }

        Output cmd_lowsnr(const Opts &o)
        {
            Output out{"lowsnr", {}, {}, {}};
            if (!(o.s_min > 0.0) || !(o.s_max >= o.s_min) || !std::isfinite(o.s_max))
                config_error("need 0 < s-min <= s-max");
            if (o.points < 1 || o.points > 1000000)
                config_error("--points must be in [1, 1e6]");
            for (double k : o.beta_over_alpha)
                if (!(k > 0.0) || !std::isfinite(k))
                    config_error("--beta-over-alpha must be > 0");
            out.config.push_back({"beta_over_alpha", join(o.beta_over_alpha)});
            out.config.push_back({"s_min", num(o.s_min)});
            out.config.push_back({"s_max", num(o.s_max)});
            out.config.push_back({"points", std::to_string(o.points)});

            std::vector<double> grid(o.points);
            const double la = std::log(o.s_min), lb = std::log(o.s_max);
            for (int i = 0; i < o.points; ++i)
                grid[i] = o.points == 1 ? o.s_min : std::exp(la + (lb - la) * i / (o.points - 1));

            out.table.columns = {"kind", "beta_over_alpha", "s", "rate_R", "eb_n0_db"};
            for (double k : o.beta_over_alpha)
            {
                const auto c = bounds::low_snr_curve(k, grid);
                for (const auto &p : c.points)
                    out.table.rows.push_back({std::string("point"), k, p.s, p.rate_R, p.eb_n0_db});
                const auto &m = c.points[c.argmin];
                out.table.rows.push_back({std::string("argmin"), k, m.s, m.rate_R, m.eb_n0_db});
            }
            return out;
        }

        Output cmd_gain(const Opts &o)
        {
            Output out{"gain", {}, {}, {}};
            const auto g = geom_of(o);
            const auto sig = sig_of(o);
            const auto q = quad_of(o);
            if (o.snr_pair.size() != 2 || o.snr_pair[0] == o.snr_pair[1])
                config_error("--snr-pair needs two distinct values");
            common_config(o, out.config);
            out.config.push_back({"snr_pair", join(o.snr_pair)});
            const double slope = bounds::multiplexing_gain(g, sig, {o.snr_pair[0], o.snr_pair[1]}, q);
            out.table.columns = {"alpha", "beta", "snr_db_lo", "snr_db_hi", "slope", "full_gain"};
            out.table.rows.push_back({o.alpha, o.beta, o.snr_pair[0], o.snr_pair[1], slope, 1.0 - o.beta});
            return out;
        }

        bounds::SweepPlan sweep_plan(const Opts &o)
        {
            bounds::SweepPlan p;
            p.alpha = o.alpha;
            p.tau0 = o.tau0;
            p.P = o.P;
            p.betas = o.betas.empty() ? std::vector<double>{o.beta} : o.betas;
            p.snr_db = snr_axis(o, {6.0});
            p.sigma_theta2 = o.sigma_list.empty() ? std::vector<double>{o.sigma_theta2} : o.sigma_list;
            p.families.clear();
            for (const auto &f : (o.families.empty() ? std::vector<std::string>{o.signaling} : o.families))
                p.families.push_back(parse_family(f, 0.0));
            p.hyperprior = parse_hyperprior(o.hyperprior);
            p.include_hh = o.with_hh;
            p.hh = hh_of(o);
            p.quad = quad_of(o);
            p.rate.detector = det_of(o);
            p.rate.threads = o.threads;
            return p;
        }

        Output cmd_sweep(const Opts &o)
        {
            Output out{"sweep", {}, {}, {}};
            const auto p = sweep_plan(o);
            out.config.push_back({"alpha", num(p.alpha)});
            out.config.push_back({"tau0", num(p.tau0)});
            out.config.push_back({"power", num(p.P)});
            out.config.push_back({"betas", join(p.betas)});
            out.config.push_back({"snr_db", join(p.snr_db)});
            out.config.push_back({"sigma_theta2", join(p.sigma_theta2)});
            std::string fams;
            for (auto f : p.families)
                fams += (fams.empty() ? "" : ",") + std::string(core::to_string(f));
            out.config.push_back({"families", fams});
            out.config.push_back({"hyperprior", o.hyperprior});
            out.config.push_back({"hh", p.include_hh ? "on" : "off"});
            out.config.push_back({"hh_power", o.hh_power});
            out.config.push_back({"hermite_nodes", std::to_string(o.hermite)});
            out.config.push_back({"legendre_nodes_tau", std::to_string(o.leg_tau)});
            out.config.push_back({"legendre_nodes_mu", std::to_string(o.leg_mu)});
            out.config.push_back({"scan_points", std::to_string(o.scan)});
            out.table = checked([&] { return bounds::sweep(p); });
            return out;
        }

        Output cmd_simulate(const Opts &o, const std::vector<std::string> &sigs)
        {
            Output out{"simulate", {}, {}, {}};
            const auto snr = snr_axis(o, parse_range("0:12:3"));
            const int Ttr = o.Ttr < 0 ? o.M : o.Ttr;
            out.config.push_back({"M", std::to_string(o.M)});
            out.config.push_back({"N", std::to_string(o.N)});
            out.config.push_back({"T_c", std::to_string(o.Tc)});
            out.config.push_back({"T_tr", std::to_string(Ttr)});
            out.config.push_back({"t", join_any(o.t)});
            out.config.push_back({"m", std::to_string(o.m)});
            out.config.push_back({"power", num(o.P)});
            out.config.push_back({"signaling", join_any(sigs)});
            out.config.push_back({"sigma_theta2", num(o.sigma_theta2)});
            out.config.push_back({"hyperprior", o.hyperprior});
            out.config.push_back({"trials", std::to_string(o.trials)});
            out.config.push_back({"seed", std::to_string(o.seed)});
            out.config.push_back({"snr_db", join(snr)});
            out.config.push_back({"pilots", "qpsk"});

            out.table.columns = {"signaling", "t", "snr_db", "trials", "nmse", "nmse_stderr", "nmse_pred",
                                 "xi2_emp", "xi2_stderr", "xi2_pred", "offdiag_abs_mean", "offdiag_scaled"};
            for (const auto &sname : sigs)
                for (int t : o.t)
                    for (double s : snr)
                    {
                        sim::McConfig c;
                        c.M = o.M;
                        c.N = o.N;
                        c.T_c = o.Tc;
                        c.T_tr = Ttr;
                        c.stage_t = t;
                        c.substage_m = o.m;
                        c.N0 = n0_of(o.P, s);
                        c.sig = {parse_family(sname, o.sigma_theta2), o.P, o.sigma_theta2,
                                 parse_hyperprior(o.hyperprior)};
                        c.trials = o.trials;
                        c.seed = o.seed;
                        c.threads = o.threads;
                        sim::validate(c);
                        const auto r = sim::measure_mse(c);
                        out.table.rows.push_back({std::string(core::to_string(c.sig.family)),
                                                  static_cast<std::int64_t>(t), s, r.trials, r.normalized_mse.mean,
                                                  r.normalized_mse.stderr_, r.prediction.normalized_mse,
                                                  r.xi2_empirical.mean, r.xi2_empirical.stderr_, r.prediction.xi2,
                                                  r.offdiag_abs_mean.mean, r.offdiag_scaled});
                    }
            return out;
        }

        Output cmd_offdiag(const Opts &o)
        {
            Output out{"offdiag", {}, {}, {}};
            sim::ScalingPlan p;
            p.Ms = o.Ms;
            p.alpha = o.alpha;
            p.tc_per_M = o.tc_per_M;
            p.ttr_per_M = o.ttr_per_M;
            p.t_per_M = o.t_per_M;
            const auto snr = snr_axis(o, {0.0});
            if (snr.size() != 1)
                config_error("offdiag takes a single SNR");
            p.N0 = n0_of(o.P, snr[0]);
            p.sig = {parse_family(o.signaling, o.sigma_theta2), o.P, o.sigma_theta2, parse_hyperprior(o.hyperprior)};
            p.trials = o.trials;
            p.seed = o.seed;
            p.threads = o.threads;
            for (int M : p.Ms)
                sim::validate(sim::scaling_config(p, M));

            out.config.push_back({"Ms", join_any(p.Ms)});
            out.config.push_back({"alpha", num(p.alpha)});
            out.config.push_back({"tc_per_M", num(p.tc_per_M)});
            out.config.push_back({"ttr_per_M", num(p.ttr_per_M)});
            out.config.push_back({"t_per_M", num(p.t_per_M)});
            out.config.push_back({"snr_db", num(snr[0])});
            out.config.push_back({"power", num(o.P)});
            out.config.push_back({"signaling", o.signaling});
            out.config.push_back({"sigma_theta2", num(o.sigma_theta2)});
            out.config.push_back({"trials", std::to_string(p.trials)});
            out.config.push_back({"seed", std::to_string(p.seed)});

            const auto st = sim::offdiag_scaling_study(p);
            out.table.columns = {"M", "N", "T_c", "T_tr", "t", "xi2_emp", "xi2_stderr", "xi2_pred",
                                 "offdiag_abs_mean", "offdiag_abs_stderr", "offdiag_mean_abs",
                                 "offdiag_mean_abs_stderr", "offdiag_scaled", "offdiag_abs_scaled"};
            for (const auto &row : st.rows)
            {
                const auto c = sim::scaling_config(p, row.M);
                const auto &r = row.result;
                out.table.rows.push_back({static_cast<std::int64_t>(c.M), static_cast<std::int64_t>(c.N),
                                          static_cast<std::int64_t>(c.T_c), static_cast<std::int64_t>(c.T_tr),
                                          static_cast<std::int64_t>(c.stage_t), r.xi2_empirical.mean,
                                          r.xi2_empirical.stderr_, r.prediction.xi2, r.offdiag_abs_mean.mean,
                                          r.offdiag_abs_mean.stderr_, r.offdiag_mean_abs.mean,
                                          r.offdiag_mean_abs.stderr_, r.offdiag_scaled, r.offdiag_abs_scaled});
            }
            out.summary.push_back({"trend_slope", num(st.trend_slope)});
            out.summary.push_back({"trend_slope_stderr", num(st.trend_slope_stderr)});
            out.summary.push_back({"scaled_bounded", st.scaled_bounded ? "true" : "false"});
            out.summary.push_back({"abs_mean_decreasing", st.abs_mean_decreasing ? "true" : "false"});
            return out;
        }

        // ---- presets -------------------------------------------------------

        std::vector<Output> run_preset(Opts o)
        {
            std::vector<Output> outs;
            o.alpha = 1.0;
            o.tau0 = 0.0;
            o.P = 1.0;
            if (o.preset == "fig2")
            {
                o.betas = {0.1, 0.5};
                o.snr_db = {6.0};
                o.sigma_list = parse_range("0:0.5:0.05");
                o.families = {"gauss", "qpsk"};
                outs.push_back(cmd_sweep(o));
            }
            else if (o.preset == "fig3")
            {
                o.betas = {0.1, 0.5};
                o.snr_db = parse_range("0:12:1");
                o.sigma_list = {0.0};
                o.families = {"gauss", "qpsk"};
                o.with_hh = true;
                outs.push_back(cmd_sweep(o));
            }
            else if (o.preset == "fig5")
            {
                o.beta_over_alpha = {0.1, 0.5};
                o.s_min = 1e-2;
                o.s_max = 1e2;
                o.points = 200;
                outs.push_back(cmd_lowsnr(o));
            }
            else if (o.preset == "fig6")
            {
                o.M = o.N = 8;
                o.Tc = 128;
                o.Ttr = 8;
                o.t = {17, 81};
                o.m = 3;
                o.sigma_theta2 = 0.0;
                o.snr_db = parse_range("0:20:2");
                outs.push_back(cmd_simulate(o, {"qpsk", "gauss"}));
            }
            else
                config_error("unknown preset '" + o.preset + "' (fig2, fig3, fig5, fig6)");
            for (auto &x : outs)
                x.config.insert(x.config.begin(), {"preset", o.preset});
            return outs;
        }

        // ---- writers -------------------------------------------------------

        std::string csv_cell(const Cell &c)
        {
            if (const double *d = std::get_if<double>(&c))
                return num(*d);
            if (const std::int64_t *i = std::get_if<std::int64_t>(&c))
                return std::to_string(*i);
            const std::string &s = std::get<std::string>(c);
            if (s.find_first_of(",\"\r\n") == std::string::npos)
                return s;
            std::string q = "\"";
            for (char ch : s)
                q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
            return q + "\"";
        }

        void write_csv(std::ostream &os, const Output &o)
        {
            os << "# sdmimo " << SDMIMO_VERSION << "\n";
            os << "# command: " << o.command << "\n";
            for (const auto &[k, v] : o.config)
                os << "# " << k << ": " << v << "\n";
            os << "# units: rates in bits/channel use/transmit antenna, snr in dB, powers linear\n";
            for (const auto &[k, v] : o.summary)
                os << "# summary." << k << ": " << v << "\n";
            for (std::size_t i = 0; i < o.table.columns.size(); ++i)
                os << (i ? "," : "") << o.table.columns[i];
            os << "\n";
            for (const auto &row : o.table.rows)
            {
                for (std::size_t i = 0; i < row.size(); ++i)
                    os << (i ? "," : "") << csv_cell(row[i]);
                os << "\n";
            }
        }

        nlohmann::ordered_json to_json(const Output &o)
        {
            nlohmann::ordered_json j;
            j["tool"] = "sdmimo";
            j["version"] = SDMIMO_VERSION;
            j["command"] = o.command;
            auto &cfg = j["config"] = nlohmann::ordered_json::object();
            for (const auto &[k, v] : o.config)
                cfg[k] = v;
            j["units"] = "rates in bits/channel use/transmit antenna, snr in dB, powers linear";
            j["columns"] = o.table.columns;
            auto &rows = j["rows"] = nlohmann::ordered_json::array();
            for (const auto &row : o.table.rows)
            {
                auto r = nlohmann::ordered_json::array();
                for (const auto &c : row)
                    std::visit(
                        [&](const auto &v)
                        {
                            using V = std::decay_t<decltype(v)>;
                            if constexpr (std::is_same_v<V, double>)
                            {
                                if (std::isfinite(v))
                                    r.push_back(v);
                                else
                                    r.push_back(num(v));
                            }
                            else
                                r.push_back(v);
                        },
                        c);
                rows.push_back(std::move(r));
            }
            if (!o.summary.empty())
            {
                auto &s = j["summary"] = nlohmann::ordered_json::object();
                for (const auto &[k, v] : o.summary)
                    s[k] = v;
            }
            return j;
        }

        void write_all(std::ostream &os, const std::vector<Output> &outs, const std::string &format)
        {
            if (format == "csv")
            {
                for (std::size_t i = 0; i < outs.size(); ++i)
                {
                    if (i)
                        os << "\n";
                    write_csv(os, outs[i]);
                }
                return;
            }
            if (outs.size() == 1)
                os << to_json(outs[0]).dump(2) << "\n";
            else
            {
                auto arr = nlohmann::ordered_json::array();
                for (const auto &o : outs)
                    arr.push_back(to_json(o));
                os << arr.dump(2) << "\n";
            }
        }

        std::string one_line(std::string s)
        {
            for (char &c : s)
                if (c == '\n' || c == '\r')
                    c = ' ';
            return s;
        }

        void report(std::ostream &err, ErrorKind kind, const std::string &msg)
        {
            nlohmann::json m = one_line(msg);
            err << "error kind=" << to_string(kind) << " exit=" << exit_code(kind) << " message=" << m.dump() << "\n";
        }

        void add_model_opts(CLI::App *a, Opts &o)
        {
            a->add_option("--alpha", o.alpha, "M/N");
            a->add_option("--beta", o.beta, "M/T_c");
            a->add_option("--tau0", o.tau0, "T_tr/T_c");
            a->add_option("--power", o.P, "symbol power P (linear)");
            a->add_option("--signaling", o.signaling, "gauss | qpsk | gauss-biased | qpsk-biased");
            a->add_option("--sigma-theta2", o.sigma_theta2, "bias variance (linear, absolute)");
            a->add_option("--hyperprior", o.hyperprior, "two-point | fixed-magnitude");
        }

        void add_snr_opts(CLI::App *a, Opts &o)
        {
            a->add_option("--snr-db", o.snr_db, "SNR P/N0 in dB (comma separated)")->delimiter(',');
            a->add_option("--snr-range", o.snr_range, "start:stop:step in dB");
        }

        void add_quad_opts(CLI::App *a, Opts &o)
        {
            a->add_option("--hermite-nodes", o.hermite);
            a->add_option("--legendre-tau", o.leg_tau);
            a->add_option("--legendre-mu", o.leg_mu);
            a->add_option("--scan-points", o.scan, "detector scan density for non-Gaussian priors");
        }
    }

    int exit_code(ErrorKind kind) { return kind == ErrorKind::InvalidConfig ? 2 : 3; }

    int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
    {
        Opts o;
        CLI::App app{"Rate bounds and simulation for successive decoding over MIMO channels without CSI", "sdmimo"};
        app.set_version_flag("--version", std::string(SDMIMO_VERSION));
        app.require_subcommand(0, 1);
        app.fallthrough();
        app.add_option("--preset", o.preset, "fig2 | fig3 | fig5 | fig6");
        app.add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
        app.add_option("--output,-o", o.output, "output file (default stdout)");
        app.add_option("--threads", o.threads, "worker threads (default SDMIMO_THREADS or all cores)");
        app.add_option("--trials", o.trials, "Monte Carlo trials (simulate, offdiag, fig6)");
        app.add_option("--seed", o.seed, "Monte Carlo seed");

        auto *est = app.add_subcommand("estimator", "channel-estimation fixed point xi2(tau)");
        add_model_opts(est, o);
        add_snr_opts(est, o);
        est->add_option("--tau", o.tau)->delimiter(',');

        auto *det = app.add_subcommand("detector", "detector fixed point sigma2(tau, mu) with candidates");
        add_model_opts(det, o);
        add_snr_opts(det, o);
        add_quad_opts(det, o);
        det->add_option("--tau", o.tau)->delimiter(',');
        det->add_option("--mu", o.mu)->delimiter(',');

        auto *rate = app.add_subcommand("rate", "achievable-rate lower bound");
        add_model_opts(rate, o);
        add_snr_opts(rate, o);
        add_quad_opts(rate, o);

        auto *hh = app.add_subcommand("hh", "large-system pilot-only (one-shot estimation) bound");
        hh->add_option("--alpha", o.alpha);
        hh->add_option("--beta", o.beta);
        hh->add_option("--power", o.P);
        add_snr_opts(hh, o);
        hh->add_option("--hh-tau0", o.hh_tau0, "pilot fraction (default beta)");
        hh->add_option("--hh-power", o.hh_power, "optimized | equal");

        auto *low = app.add_subcommand("lowsnr", "low-SNR rate and Eb/N0 curve");
        low->add_option("--beta-over-alpha", o.beta_over_alpha)->delimiter(',');
        low->add_option("--s-min", o.s_min);
        low->add_option("--s-max", o.s_max);
        low->add_option("--points", o.points);

        auto *gain = app.add_subcommand("gain", "high-SNR multiplexing-gain slope");
        add_model_opts(gain, o);
        add_quad_opts(gain, o);
        gain->add_option("--snr-pair", o.snr_pair, "two SNRs in dB")->delimiter(',');

        auto *sw = app.add_subcommand("sweep", "rate table over beta x snr x sigma_theta2");
        add_model_opts(sw, o);
        add_snr_opts(sw, o);
        add_quad_opts(sw, o);
        sw->add_option("--betas", o.betas)->delimiter(',');
        sw->add_option("--sigma-theta2-values", o.sigma_list)->delimiter(',');
        sw->add_option("--families", o.families, "gauss,qpsk,...")->delimiter(',');
        sw->add_flag("--hh", o.with_hh, "add the pilot-only bound as a series");
        sw->add_option("--hh-tau0", o.hh_tau0);
        sw->add_option("--hh-power", o.hh_power);

        std::vector<std::string> sim_sigs;
        auto *simc = app.add_subcommand("simulate", "finite-size Monte Carlo of the LMMSE receiver");
        simc->add_option("--m", o.M, "transmit antennas");
        simc->add_option("--n", o.N, "receive antennas");
        simc->add_option("--tc", o.Tc, "coherence time");
        simc->add_option("--ttr", o.Ttr, "pilot symbols (default M)");
        simc->add_option("--t", o.t, "stage index (1-based)")->delimiter(',');
        simc->add_option("--substage", o.m, "substage index (1-based)");
        simc->add_option("--power", o.P);
        simc->add_option("--signaling", sim_sigs, "gauss | qpsk | ...")->delimiter(',');
        simc->add_option("--sigma-theta2", o.sigma_theta2);
        simc->add_option("--hyperprior", o.hyperprior);
        simc->add_option("--trials", o.trials);
        simc->add_option("--seed", o.seed);
        add_snr_opts(simc, o);

        auto *off = app.add_subcommand("offdiag", "Xi_t diagonal and off-diagonal scaling over M");
        off->add_option("--ms", o.Ms)->delimiter(',');
        off->add_option("--alpha", o.alpha);
        off->add_option("--tc-per-m", o.tc_per_M);
        off->add_option("--ttr-per-m", o.ttr_per_M);
        off->add_option("--t-per-m", o.t_per_M);
        off->add_option("--power", o.P);
        off->add_option("--signaling", o.signaling);
        off->add_option("--sigma-theta2", o.sigma_theta2);
        off->add_option("--trials", o.trials);
        off->add_option("--seed", o.seed);
        add_snr_opts(off, o);

        try
        {
            std::vector<std::string> rev(args.rbegin(), args.rend());
            app.parse(rev);
        }
        catch (const CLI::Success &e)
        {
            return app.exit(e, out, err);
        }
        catch (const CLI::ParseError &e)
        {
            if (e.get_exit_code() == 0)
                return app.exit(e, out, err);
            report(err, ErrorKind::InvalidConfig, e.what());
            return 2;
        }

        try
        {
            std::vector<Output> outs;
            const auto subs = app.get_subcommands();
            if (!o.preset.empty())
            {
                if (!subs.empty())
                    config_error("--preset cannot be combined with a command");
                outs = run_preset(o);
            }
            else if (subs.empty())
                config_error("no command given (estimator, detector, rate, hh, lowsnr, gain, sweep, simulate, offdiag)");
            else
            {
                const std::string name = subs[0]->get_name();
                if (name == "estimator")
                    outs.push_back(cmd_estimator(o));
                else if (name == "detector")
                    outs.push_back(cmd_detector(o));
                else if (name == "rate")
                    outs.push_back(cmd_rate(o));
                else if (name == "hh")
                    outs.push_back(cmd_hh(o));
                else if (name == "lowsnr")
                    outs.push_back(cmd_lowsnr(o));
                else if (name == "gain")
                    outs.push_back(cmd_gain(o));
                else if (name == "sweep")
                    outs.push_back(cmd_sweep(o));
                else if (name == "simulate")
                    outs.push_back(cmd_simulate(o, sim_sigs.empty() ? std::vector<std::string>{"qpsk"} : sim_sigs));
                else
                    outs.push_back(cmd_offdiag(o));
            }

            if (o.output.empty())
                write_all(out, outs, o.format);
            else
            {
                std::ofstream f(o.output, std::ios::binary);
                if (!f)
                    config_error("cannot open output file '" + o.output + "'");
                write_all(f, outs, o.format);
                f.flush();
                if (!f)
                    fail(ErrorKind::InvalidConfig, "failed writing '" + o.output + "'");
            }
            return 0;
        }
        catch (const Error &e)
        {
            report(err, e.kind(), e.detail());
            return exit_code(e.kind());
        }
        catch (const std::exception &e)
        {
            report(err, ErrorKind::NonConvergence, e.what());
            return 3;
        }
    }

    int run(int argc, char **argv)
    {
        std::vector<std::string> args;
        for (int i = 1; i < argc; ++i)
            args.emplace_back(argv[i]);
        return run(args, std::cout, std::cerr);
    }
}

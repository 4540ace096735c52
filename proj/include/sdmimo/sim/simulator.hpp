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

#ifndef SDMIMO_SIM_SIMULATOR_HPP
#define SDMIMO_SIM_SIMULATOR_HPP

// Finite-size block-fading MIMO with the LMMSE channel estimator and the
// successive LMMSE detector. Time indices are 1-based: pilots occupy columns
// 1..T_tr, stage t refers to column t.

#include "sdmimo/core/signaling.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace sdmimo::sim
{
    using cd = std::complex<double>;

    struct McConfig
    {
        int M = 8;
        int N = 8;
        int T_c = 32;
        int T_tr = 8;        // 0 allowed: known data columns then do all the training
        int stage_t = 17;    // T_tr < t <= T_c
        int substage_m = 3;  // 1 <= m <= M
        double N0 = 1.0;
        core::Signaling sig{core::Family::QpskUnbiased, 1.0, 0.0};
        std::int64_t trials = 1000;
        std::uint64_t seed = 1;
        unsigned threads = 0;      // 0: SDMIMO_THREADS or hardware concurrency
        bool check_spectrum = true;
    };

    void validate(const McConfig &cfg, bool allow_zero_noise = false);

    // 64-bit generator for one trial, derived from (seed, trial) by splitmix64.
    std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial);

    // CN(0, 1) sample, Box-Muller.
    cd complex_normal(std::mt19937_64 &rng);

    struct BlockState
    {
        Eigen::MatrixXcd H;     // N x M
        Eigen::MatrixXcd X;     // M x T_c
        Eigen::MatrixXcd Theta; // M x T_c, zero on pilot columns
        Eigen::MatrixXcd Noise; // N x T_c
        Eigen::MatrixXcd Y;     // N x T_c
    };

    BlockState simulate_block(const McConfig &cfg, std::mt19937_64 &rng);

    struct ChannelEstimate
    {
        Eigen::MatrixXcd Hhat; // N x M
        Eigen::MatrixXcd Xi;   // M x M error covariance
    };

    ChannelEstimate lmmse_channel_estimate(const BlockState &block, const McConfig &cfg);

    struct Detection
    {
        cd xhat;              // estimate of x_{m,t}
        double posterior_var; // (Xi^L)_{11}
        double zeta;
    };

    Detection lmmse_detect(const BlockState &block, const ChannelEstimate &est, const McConfig &cfg);

    struct Stat
    {
        double mean = 0.0;
        double stderr_ = 0.0;
    };

    struct McPrediction
    {
        double beta = 0.0, tau = 0.0, mu = 0.0, alpha = 0.0;
        double xi2 = 0.0;
        double sigma2 = 0.0;
        double normalized_mse = 0.0;
    };

    struct McResult
    {
        std::int64_t trials = 0;
        Stat normalized_mse;    // |x - xhat|^2 / P
        Stat xi2_empirical;     // per-trial mean diagonal of Xi_t
        Stat offdiag_abs_mean;  // per-trial mean |Xi_ij|, i < j
        Stat offdiag_mean_abs;  // |mean of Xi_ij| over trials and pairs
        double offdiag_scaled = 0.0;     // M^{3/4} * offdiag_mean_abs
        double offdiag_abs_scaled = 0.0; // M^{3/4} * offdiag_abs_mean
        McPrediction prediction;
    };

    // Large-system companion values at beta = M/T_c, tau = (t-1)/T_c, mu = (m-1)/M.
    McPrediction predict(const McConfig &cfg);

    McResult measure_mse(const McConfig &cfg);

    struct ScalingRow
    {
        int M = 0;
        McResult result;
    };

    struct ScalingStudy
    {
        std::vector<ScalingRow> rows;
        double trend_slope = 0.0;        // least squares of offdiag_scaled vs log2 M
        double trend_slope_stderr = 0.0;
        bool abs_mean_decreasing = false;
        bool scaled_bounded = false;     // slope <= 2 stderr
    };

    // Geometric family: N = M / alpha, T_c = tc_per_M * M, T_tr = ttr_per_M * M,
    // t = t_per_M * M + 1, m = 1. With T_tr = 0 every known column is a (genie-aided)
    // data column, so the known symbols are Gaussian when the signaling is.
    struct ScalingPlan
    {
        std::vector<int> Ms{4, 8, 16, 32};
        double alpha = 1.0;
        double tc_per_M = 4.0;
        double ttr_per_M = 0.0;
        double t_per_M = 2.0;
        double N0 = 1.0;
        core::Signaling sig{core::Family::GaussianUnbiased, 1.0, 0.0};
        std::int64_t trials = 2000;
        std::uint64_t seed = 1;
        unsigned threads = 0;
    };

    McConfig scaling_config(const ScalingPlan &plan, int M);

    ScalingStudy offdiag_scaling_study(const ScalingPlan &plan);

    // slope and its standard error for y vs x with independent per-point errors
    void trend(const std::vector<double> &x, const std::vector<double> &y, const std::vector<double> &se,
               double &slope, double &slope_se);
}

#endif

// SPDX-License-Identifier: Apache-2.0
//
// risbf - hybrid beamforming and RIS phase design for mmWave downlinks
// Copyright (C) 2026 The risbf Authors
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

#ifndef RISBF_INDIVIDUAL_DESIGN_HPP
#define RISBF_INDIVIDUAL_DESIGN_HPP

#include <vector>

#include "risbf/channel_model.hpp"
#include "risbf/config.hpp"
#include "risbf/manifold_opt.hpp"
#include "risbf/system_model.hpp"

namespace risbf
{
    // ||h_k^H Theta G||^2 for every user.
    std::vector<double> user_gains(const ChannelSet &channels, const CVec &ris);
    double min_user_gain(const ChannelSet &channels, const CVec &ris);

    struct MaxMinOptions
    {
        std::size_t random_candidates = 100;
        // Smoothing sharpness, relative to the mean candidate gain.
        std::vector<double> tau_schedule{4.0, 40.0, 400.0};
        RcgOptions rcg{.max_iters = 300, .grad_tol = 1e-10};
        std::uint64_t seed = 0;
    };

    // RIS phases approximately maximizing the weakest user's cascaded gain.
    // Uses manifold descent on a log-sum-exp smoothed minimum with increasing
    // sharpness; the result is the best true min-gain among the random
    // candidates and every continuation round.
    CVec ris_max_min(const ChannelSet &channels, const MaxMinOptions &options = {});

    struct ZfReference
    {
        CMat f_opt; // M x K
    };

    // H~^+ diag(sqrt(gamma_k sigma2_k)), H~ = cascaded channel. Throws
    // Infeasible when H~ does not have full row rank.
    ZfReference zf_reference(const ChannelSet &channels, const CVec &ris, const std::vector<double> &gamma,
                             const std::vector<double> &sigma2);

    struct Codebook
    {
        std::size_t mu = 1;
        std::size_t ny = 1;
        std::size_t nz = 1;
        CMat columns; // M x (mu^2 ny nz); column i * (mu nz) + j is a_B(psi_i, phi_j)
    };

    Codebook build_codebook(std::size_t mu, std::size_t ny, std::size_t nz, const ArrayGeometry &bs_geom);

    struct OmpResult
    {
        std::vector<CVec> v_blocks;           // unit-modulus phase vector per chain
        std::vector<std::size_t> columns;     // selected codebook column per chain
        std::vector<std::size_t> chain_order; // chain chosen at each greedy step
        std::vector<double> residual_history; // ||F_opt - A_sel F_BB||_F after each step
        CMat f_bb;                            // least-squares digital factor, N x K
    };

    // Greedy sub-connected OMP: each step picks the (unassigned chain,
    // codeword) pair whose masked column best correlates with the residual,
    // then refits F_BB by least squares.
    OmpResult omp_analog(const CMat &f_opt, const Codebook &codebook, std::size_t n, std::size_t d);

    struct PowerMinResult
    {
        CMat w;                          // N x K
        double power = 0.0;              // D sum ||w_k||^2
        std::vector<double> dual_powers; // uplink powers at the fixed point
        std::size_t iterations = 0;
    };

    struct PowerMinOptions
    {
        std::size_t max_iters = 100000;
        double tol = 1e-10;
    };

    // min D sum ||w_k||^2 s.t. SINR_k >= gamma_k for fixed effective rows
    // (K x N), via the uplink-downlink duality fixed point. Every constraint
    // is tight at the returned W. Throws Infeasible if the fixed point
    // diverges.
    PowerMinResult digital_power_min(const CMat &effective_rows, const std::vector<double> &gamma,
                                     const std::vector<double> &sigma2, std::size_t d,
                                     const PowerMinOptions &options = {});

    // RIS by max-min gain, analog by OMP against the ZF reference, digital by
    // SINR-constrained power minimization.
    BeamformingSolution individual_solve(const SystemConfig &config, const ChannelSet &channels,
                                         std::uint64_t seed = 0);
} // namespace risbf

#endif

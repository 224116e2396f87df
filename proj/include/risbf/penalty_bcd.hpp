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

#ifndef RISBF_PENALTY_BCD_HPP
#define RISBF_PENALTY_BCD_HPP

#include <array>
#include <optional>
#include <vector>

#include "risbf/config.hpp"
#include "risbf/manifold_opt.hpp"
#include "risbf/system_model.hpp"

namespace risbf
{
    // Auxiliary variables and penalty bookkeeping. t(k, j) stands in for
    // h_k^H Theta G V w_j.
    struct PenaltyState
    {
        CMat t;
        double rho = 1e-3;
        double xi = 0.0;
        std::size_t inner_iters = 0;
        std::size_t outer_iters = 0;
        std::vector<double> objective_trace;
    };

    // One row of the convergence trace, recorded at the end of each outer
    // iteration (rho is the value used during that iteration).
    struct TraceRecord
    {
        std::size_t outer_iter = 0;
        double rho = 0.0;
        double objective = 0.0;
        double xi = 0.0;
    };

    struct PenaltyOptions
    {
        bool update_theta = true;
        bool update_analog = true;
        std::optional<CVec> initial_ris; // start (or, with update_theta off, fixed) RIS phases
        RcgOptions rcg{.max_iters = 40, .grad_tol = 1e-9};
    };

    struct PenaltyDiagnostics
    {
        std::vector<TraceRecord> trace;
        std::vector<double> xi_trace;
        std::size_t total_inner = 0;
        // Largest relative increase of the penalized objective seen in each
        // block update (W, Theta, V, t). Non-positive up to round-off.
        std::array<double, 4> max_block_increase{0.0, 0.0, 0.0, 0.0};
        double channel_scale = 1.0; // normalization applied before solving
    };

    struct PenaltyResult
    {
        BeamformingSolution solution; // in physical units
        PenaltyState state;           // in normalized units
        PenaltyDiagnostics diagnostics;
        bool converged = false;       // xi < eps2 before the outer cap
    };

    // D sum_k ||w_k||^2 + (rho / 2) sum_{k,j} |h~_k w_j - t(k, j)|^2
    double penalized_objective(const ChannelSet &channels, const BeamformingSolution &solution, const PenaltyState &state);
    double penalized_objective(const CMat &effective_rows, const CMat &w, std::size_t d, const PenaltyState &state);

    // Closed-form minimizer over W: (2D I + rho R^H R) W = rho R^H T.
    CMat update_digital(const ChannelSet &channels, const BeamformingSolution &solution, const PenaltyState &state);
    CMat update_digital(const CMat &effective_rows, std::size_t d, const PenaltyState &state);

    QuadraticUnitModulusObjective theta_objective(const ChannelSet &channels, const BeamformingSolution &solution,
                                                  const PenaltyState &state);
    QuadraticUnitModulusObjective analog_objective(const ChannelSet &channels, const BeamformingSolution &solution,
                                                   const PenaltyState &state);

    // RIS phases from the manifold subproblem, warm-started at solution.ris.
    CVec update_theta(const ChannelSet &channels, const BeamformingSolution &solution, const PenaltyState &state,
                      const RcgOptions &options = {});
    // Analog phase blocks from the manifold subproblem, warm-started at solution.v_blocks.
    std::vector<CVec> update_analog(const ChannelSet &channels, const BeamformingSolution &solution,
                                    const PenaltyState &state, const RcgOptions &options = {});

    // Euclidean projection of a onto {t : |t_k|^2 >= gamma (sum_{j != k} |t_j|^2 + sigma2)}.
    CVec project_sinr_row(const CVec &a, std::size_t k, double gamma, double sigma2);
    CMat update_t(const ChannelSet &channels, const BeamformingSolution &solution, const std::vector<double> &gamma);
    CMat update_t(const CMat &products, const std::vector<double> &gamma, const std::vector<double> &sigma2);

    // max_{k,j} |h~_k w_j - t(k, j)|^2
    double stopping_indicator(const ChannelSet &channels, const BeamformingSolution &solution, const PenaltyState &state);
    double stopping_indicator(const CMat &effective_rows, const CMat &w, const PenaltyState &state);

    // Channels whitened per user (noise power 1) and divided by a common gain
    // so the penalty schedule works on O(1) quantities. Physical precoders are
    // recovered as w = w_normalized / scale.
    struct NormalizedChannels
    {
        ChannelSet channels;
        double scale = 1.0;
    };
    NormalizedChannels normalize_channels(const ChannelSet &channels);

    // Two-layer penalty method: block-coordinate descent over (W, Theta, V, t)
    // inside, rho <- rho / c outside, until the stopping indicator drops
    // below eps2 or max_outer is hit.
    PenaltyResult penalty_solve(const SystemConfig &config, const ChannelSet &channels, std::uint64_t init_seed,
                                const PenaltyOptions &options = {});
} // namespace risbf

#endif

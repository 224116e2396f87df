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

#ifndef RISBF_SYSTEM_MODEL_HPP
#define RISBF_SYSTEM_MODEL_HPP

#include <vector>

#include "risbf/channel_model.hpp"
#include "risbf/common.hpp"

namespace risbf
{
    // Hybrid precoder plus RIS configuration.
    //
    // ris holds the diagonal of the RIS response matrix (entries e^{j theta}).
    // v_blocks[n] is the phase vector of RF chain n, driving antennas
    // n*D .. n*D + D - 1.
    struct BeamformingSolution
    {
        CMat w;                     // N x K digital precoder, column k serves user k
        std::vector<CVec> v_blocks; // N vectors of length D, unit modulus
        CVec ris;                   // F, unit modulus

        std::size_t num_chains() const { return v_blocks.size(); }
        std::size_t chain_size() const { return v_blocks.empty() ? 0 : static_cast<std::size_t>(v_blocks.front().size()); }
        void validate(const ChannelSet &channels) const;
    };

    // Block-diagonal M x N analog matrix.
    CMat assemble_analog(const std::vector<CVec> &v_blocks);
    // Concatenation [v_1; ...; v_N].
    CVec stack_x(const std::vector<CVec> &v_blocks);
    std::vector<CVec> unstack_x(const CVec &x, std::size_t n, std::size_t d);
    // Z_j = diag(w_j(0) I_D, ..., w_j(N-1) I_D), so that V w_j = Z_j x.
    CMat z_matrix(const CVec &w_col, std::size_t d);

    // K x M matrix whose row k is h_k^H Theta G.
    CMat cascaded_channel(const ChannelSet &channels, const CVec &ris);

    // Quantities derived from a solution that the block updates consume.
    //
    //   rows(k, :)   = h_k^H Theta G V                      (1 x N)
    //   c(k, j)      = diag(h_k^H) G V w_j                  (F)
    //   d(k, j)      = conj(ris)^H diag(h_k^H) G Z_j        (1 x M, stored as a row vector)
    //
    // With u = conj(ris): u^H c(k, j) = rows(k, :) w_j = d(k, j) x.
    struct EffectiveChannels
    {
        CMat rows;
        std::vector<std::vector<CVec>> c;
        std::vector<std::vector<Eigen::RowVectorXcd>> d;

        static EffectiveChannels compute(const ChannelSet &channels, const BeamformingSolution &solution);
    };

    double transmit_power(const CMat &w, std::size_t d);

    // SINR of user k given the effective rows (K x N) and digital matrix.
    double sinr(std::size_t k, const CMat &effective_rows, const CMat &w, double noise_power);
    double sinr(std::size_t k, const BeamformingSolution &solution, const ChannelSet &channels);
    std::vector<double> all_sinr(const BeamformingSolution &solution, const ChannelSet &channels);
    double min_sinr_margin_db(const BeamformingSolution &solution, const ChannelSet &channels,
                              const std::vector<double> &gamma);
} // namespace risbf

#endif

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

#include "risbf/system_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace risbf
{
    void BeamformingSolution::validate(const ChannelSet &channels) const
    {
        const auto k = static_cast<Eigen::Index>(channels.num_users());
        const auto n = static_cast<Eigen::Index>(v_blocks.size());
        if (n == 0)
            throw InvalidArgument("solution has no RF chains");
        if (w.rows() != n || w.cols() != k)
            throw InvalidArgument("digital precoder must be N x K");
        const auto d = v_blocks.front().size();
        for (const auto &v : v_blocks)
            if (v.size() != d)
                throw InvalidArgument("analog blocks must share one length");
        if (n * d != channels.g.cols())
            throw InvalidArgument("N * D must equal the BS antenna count");
        if (ris.size() != channels.g.rows())
            throw InvalidArgument("RIS vector length must equal the element count");
    }

    CMat assemble_analog(const std::vector<CVec> &v_blocks)
    {
        if (v_blocks.empty())
            throw InvalidArgument("no analog blocks");
        const auto d = v_blocks.front().size();
        const auto n = static_cast<Eigen::Index>(v_blocks.size());
        CMat v = CMat::Zero(n * d, n);
        for (Eigen::Index i = 0; i < n; ++i)
        {
            if (v_blocks[static_cast<std::size_t>(i)].size() != d)
                throw InvalidArgument("analog blocks must share one length");
            v.block(i * d, i, d, 1) = v_blocks[static_cast<std::size_t>(i)];
        }
        return v;
    }

    CVec stack_x(const std::vector<CVec> &v_blocks)
    {
        if (v_blocks.empty())
            throw InvalidArgument("no analog blocks");
        const auto d = v_blocks.front().size();
        CVec x(static_cast<Eigen::Index>(v_blocks.size()) * d);
        for (std::size_t i = 0; i < v_blocks.size(); ++i)
            x.segment(static_cast<Eigen::Index>(i) * d, d) = v_blocks[i];
        return x;
    }

    std::vector<CVec> unstack_x(const CVec &x, std::size_t n, std::size_t d)
    {
        if (static_cast<std::size_t>(x.size()) != n * d)
            throw InvalidArgument("stacked analog vector has the wrong length");
        std::vector<CVec> blocks(n);
        for (std::size_t i = 0; i < n; ++i)
            blocks[i] = x.segment(static_cast<Eigen::Index>(i * d), static_cast<Eigen::Index>(d));
        return blocks;
    }

    CMat z_matrix(const CVec &w_col, std::size_t d)
    {
        const auto n = w_col.size();
        const auto dd = static_cast<Eigen::Index>(d);
        CMat z = CMat::Zero(n * dd, n * dd);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index r = 0; r < dd; ++r)
                z(i * dd + r, i * dd + r) = w_col(i);
        return z;
    }

    CMat cascaded_channel(const ChannelSet &channels, const CVec &ris)
    {
        const auto k = static_cast<Eigen::Index>(channels.num_users());
        CMat out(k, channels.g.cols());
        for (Eigen::Index u = 0; u < k; ++u)
        {
            // h_k^H Theta = (conj(h_k) .* ris)^T
            const CVec weights = channels.h[static_cast<std::size_t>(u)].conjugate().cwiseProduct(ris);
            out.row(u) = weights.transpose() * channels.g;
        }
        return out;
    }

    EffectiveChannels EffectiveChannels::compute(const ChannelSet &channels, const BeamformingSolution &solution)
    {
        solution.validate(channels);
        const std::size_t k = channels.num_users();
        const std::size_t d = solution.chain_size();
        const CMat v = assemble_analog(solution.v_blocks);
        const CMat gv = channels.g * v;     // F x N
        const CMat gvw = gv * solution.w;   // F x K

        EffectiveChannels eff;
        eff.rows = cascaded_channel(channels, solution.ris) * v;
        eff.c.assign(k, std::vector<CVec>(k));
        eff.d.assign(k, std::vector<Eigen::RowVectorXcd>(k));
        for (std::size_t u = 0; u < k; ++u)
        {
            const CVec hc = channels.h[u].conjugate();
            // ris^T diag(conj h_k) G, i.e. conj(ris)^H diag(h_k^H) G
            const Eigen::RowVectorXcd bg = hc.cwiseProduct(solution.ris).transpose() * channels.g;
            for (std::size_t j = 0; j < k; ++j)
            {
                eff.c[u][j] = hc.cwiseProduct(gvw.col(static_cast<Eigen::Index>(j)));
                // bg Z_j scales each chain's D-segment by w_j(n)
                Eigen::RowVectorXcd row = bg;
                for (Eigen::Index nn = 0; nn < solution.w.rows(); ++nn)
                    row.segment(nn * static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)) *=
                        solution.w(nn, static_cast<Eigen::Index>(j));
                eff.d[u][j] = std::move(row);
            }
        }
        return eff;
    }

    double transmit_power(const CMat &w, std::size_t d)
    {
        return static_cast<double>(d) * w.squaredNorm();
    }

    double sinr(std::size_t k, const CMat &effective_rows, const CMat &w, double noise_power)
    {
        const auto kk = static_cast<Eigen::Index>(k);
        const Eigen::RowVectorXcd products = effective_rows.row(kk) * w;
        const double signal = std::norm(products(kk));
        double interference = 0.0;
        for (Eigen::Index j = 0; j < products.size(); ++j)
            if (j != kk)
                interference += std::norm(products(j));
        return signal / (interference + noise_power);
    }

    double sinr(std::size_t k, const BeamformingSolution &solution, const ChannelSet &channels)
    {
        solution.validate(channels);
        const CMat rows = cascaded_channel(channels, solution.ris) * assemble_analog(solution.v_blocks);
        return sinr(k, rows, solution.w, channels.noise_powers.at(k));
    }

    std::vector<double> all_sinr(const BeamformingSolution &solution, const ChannelSet &channels)
    {
        solution.validate(channels);
        const CMat rows = cascaded_channel(channels, solution.ris) * assemble_analog(solution.v_blocks);
        std::vector<double> out(channels.num_users());
        for (std::size_t k = 0; k < out.size(); ++k)
            out[k] = sinr(k, rows, solution.w, channels.noise_powers[k]);
        return out;
    }

    double min_sinr_margin_db(const BeamformingSolution &solution, const ChannelSet &channels,
                              const std::vector<double> &gamma)
    {
        const auto s = all_sinr(solution, channels);
        double margin = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < s.size(); ++k)
            margin = std::min(margin, linear_to_db(s[k]) - linear_to_db(gamma.at(k)));
        return margin;
    }
} // namespace risbf

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

#include "doctest.h"

#include "oracles.hpp"
#include "risbf/config.hpp"
#include "risbf/system_model.hpp"

using namespace risbf;

namespace
{
    struct Instance
    {
        ChannelSet channels;
        BeamformingSolution sol;
    };

    Instance random_instance(oracle::Rng &rng, Eigen::Index f, Eigen::Index n, Eigen::Index d, Eigen::Index k)
    {
        Instance in;
        in.channels.g = oracle::cn_mat(rng, f, n * d);
        for (Eigen::Index u = 0; u < k; ++u)
        {
            in.channels.h.push_back(oracle::cn_vec(rng, f));
            in.channels.noise_powers.push_back(0.1 + 0.5 * static_cast<double>(u));
        }
        for (Eigen::Index c = 0; c < n; ++c)
            in.sol.v_blocks.push_back(oracle::random_phases(rng, d));
        in.sol.ris = oracle::random_phases(rng, f);
        in.sol.w = oracle::cn_mat(rng, n, k);
        return in;
    }
} // namespace

TEST_CASE("transmit_power")
{
    CMat w = CMat::Zero(6, 1);
    w(2, 0) = 1.0;
    CHECK(transmit_power(w, 6) == doctest::Approx(6.0));
    CHECK(transmit_power(CMat::Zero(3, 2), 4) == 0.0);
}

TEST_CASE("power identity sum ||V w_k||^2 = D sum ||w_k||^2")
{
    oracle::Rng rng(5);
    for (int trial = 0; trial < 50; ++trial)
    {
        const Eigen::Index n = 1 + trial % 4, d = 1 + trial % 5, k = 1 + trial % 3;
        std::vector<CVec> blocks;
        for (Eigen::Index c = 0; c < n; ++c)
            blocks.push_back(oracle::random_phases(rng, d));
        const CMat w = oracle::cn_mat(rng, n, k);
        const CMat v = assemble_analog(blocks);
        CHECK(std::abs((v * w).squaredNorm() - transmit_power(w, static_cast<std::size_t>(d))) <
              1e-10 * (1.0 + w.squaredNorm()));
    }
}

TEST_CASE("assemble_analog and stack_x worked example")
{
    const cplx j(0.0, 1.0);
    std::vector<CVec> blocks(2, CVec(2));
    blocks[0] << 1.0, 1.0;
    blocks[1] << j, -1.0;
    const CMat v = assemble_analog(blocks);
    CMat expected = CMat::Zero(4, 2);
    expected(0, 0) = 1.0;
    expected(1, 0) = 1.0;
    expected(2, 1) = j;
    expected(3, 1) = -1.0;
    CHECK(v == expected);
    CVec x(4);
    x << 1.0, 1.0, j, -1.0;
    CHECK(stack_x(blocks) == x);

    const auto back = unstack_x(x, 2, 2);
    CHECK(back[0] == blocks[0]);
    CHECK(back[1] == blocks[1]);
}

TEST_CASE("single chain: V is the block itself")
{
    oracle::Rng rng(1);
    const CVec v1 = oracle::random_phases(rng, 5);
    const CMat v = assemble_analog({v1});
    CHECK(v.cols() == 1);
    CHECK(v.col(0) == v1);
    CHECK(stack_x({v1}) == v1);
}

TEST_CASE("V w_j = Z_j x")
{
    oracle::Rng rng(17);
    for (int trial = 0; trial < 100; ++trial)
    {
        const Eigen::Index n = 1 + trial % 4, d = 1 + trial % 3;
        std::vector<CVec> blocks;
        for (Eigen::Index c = 0; c < n; ++c)
            blocks.push_back(oracle::random_phases(rng, d));
        const CVec wj = oracle::cn_vec(rng, n);
        const CVec lhs = assemble_analog(blocks) * wj;
        const CVec rhs = z_matrix(wj, static_cast<std::size_t>(d)) * stack_x(blocks);
        CHECK((lhs - rhs).norm() < 1e-12);
    }
}

TEST_CASE("sinr worked values")
{
    CMat rows(1, 1);
    rows(0, 0) = 1.0;
    CMat w(1, 1);
    w(0, 0) = 1.0;
    CHECK(sinr(0, rows, w, 0.1) == doctest::Approx(10.0));
    w(0, 0) = 0.0;
    CHECK(sinr(0, rows, w, 0.1) == 0.0);
}

TEST_CASE("sinr agrees with the brute-force expansion")
{
    oracle::Rng rng(23);
    for (int trial = 0; trial < 40; ++trial)
    {
        const Eigen::Index k = 1 + trial % 3;
        const Instance in = random_instance(rng, 3 + trial % 4, k + trial % 2, 1 + trial % 3, k);
        const auto all = all_sinr(in.sol, in.channels);
        for (std::size_t u = 0; u < static_cast<std::size_t>(k); ++u)
        {
            const double ref = oracle::brute_force_sinr(u, in.channels.h, in.sol.ris, in.channels.g, in.sol.v_blocks,
                                                        in.sol.w, in.channels.noise_powers[u]);
            CHECK(std::abs(all[u] - ref) <= 1e-10 * std::max(1.0, ref));
            CHECK(std::abs(sinr(u, in.sol, in.channels) - ref) <= 1e-10 * std::max(1.0, ref));
        }
    }
}

TEST_CASE("sinr invariant to a common RIS phase rotation")
{
    oracle::Rng rng(29);
    Instance in = random_instance(rng, 6, 3, 2, 3);
    const auto before = all_sinr(in.sol, in.channels);
    in.sol.ris *= std::polar(1.0, 1.234);
    const auto after = all_sinr(in.sol, in.channels);
    for (std::size_t u = 0; u < before.size(); ++u)
        CHECK(std::abs(before[u] - after[u]) <= 1e-10 * std::max(1.0, before[u]));
}

TEST_CASE("effective channel identities")
{
    oracle::Rng rng(31);
    for (int trial = 0; trial < 20; ++trial)
    {
        const Instance in = random_instance(rng, 4 + trial % 3, 3, 2, 3);
        const auto eff = EffectiveChannels::compute(in.channels, in.sol);
        const CVec x = stack_x(in.sol.v_blocks);
        const CVec u = in.sol.ris.conjugate(); // b in b^H c
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t j = 0; j < 3; ++j)
            {
                const cplx direct = (eff.rows.row(static_cast<Eigen::Index>(a)) * in.sol.w.col(static_cast<Eigen::Index>(j)))(0);
                const cplx via_c = u.dot(eff.c[a][j]);
                const cplx via_d = (eff.d[a][j] * x)(0);
                CHECK(std::abs(via_c - direct) < 1e-10 * (1.0 + std::abs(direct)));
                CHECK(std::abs(via_d - direct) < 1e-10 * (1.0 + std::abs(direct)));
            }
        const auto s = all_sinr(in.sol, in.channels);
        for (std::size_t a = 0; a < 3; ++a)
            CHECK(std::abs(sinr(a, eff.rows, in.sol.w, in.channels.noise_powers[a]) - s[a]) < 1e-10 * (1.0 + s[a]));
    }
}

TEST_CASE("solution validation")
{
    oracle::Rng rng(2);
    Instance in = random_instance(rng, 4, 2, 2, 2);
    in.sol.validate(in.channels);
    Instance bad = in;
    bad.sol.ris = CVec::Ones(3);
    CHECK_THROWS_AS(bad.sol.validate(in.channels), InvalidArgument);
    bad = in;
    bad.sol.w = CMat::Zero(3, 2);
    CHECK_THROWS_AS(bad.sol.validate(in.channels), InvalidArgument);
}

TEST_CASE("config defaults and validation")
{
    const SystemConfig desk = SystemConfig::desk_scale();
    desk.validate();
    CHECK(desk.m == 16);
    CHECK(desk.n == 4);
    CHECK(desk.k == 3);
    CHECK(desk.f() == 16);
    CHECK(desk.d() == 4);
    CHECK(desk.gamma[0] == doctest::Approx(10.0));
    CHECK(linear_to_db(desk.sigma2[0]) + 30.0 == doctest::Approx(-85.0));

    const SystemConfig paper = SystemConfig::paper_scale();
    paper.validate();
    CHECK(paper.m == 36);
    CHECK(paper.n == 6);
    CHECK(paper.f() == 36);
    CHECK(paper.bs_array_rows() * paper.bs_array_cols() == 36);

    SystemConfig bad = desk;
    bad.m = 15;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = desk;
    bad.k = 5;
    bad.set_gamma_db(10.0);
    bad.set_noise_dbm(-85.0);
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = desk;
    bad.c = 1.0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = desk;
    bad.gamma[1] = 0.0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = desk;
    bad.sigma2[2] = -1.0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

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
#include "risbf/individual_design.hpp"
#include "risbf/penalty_bcd.hpp"

using namespace risbf;

namespace
{
    ChannelSet random_channels(oracle::Rng &rng, Eigen::Index f, Eigen::Index m, Eigen::Index k)
    {
        ChannelSet ch;
        ch.g = oracle::cn_mat(rng, f, m);
        for (Eigen::Index u = 0; u < k; ++u)
        {
            ch.h.push_back(oracle::cn_vec(rng, f));
            ch.noise_powers.push_back(1.0);
        }
        return ch;
    }

    Codebook small_codebook(std::size_t mu, std::size_t rows, std::size_t cols)
    {
        const ArrayGeometry geom{rows, cols, 0.5};
        return build_codebook(mu, cols, rows, geom);
    }
} // namespace

TEST_CASE("user gains are squared norms of the cascaded rows")
{
    oracle::Rng rng(1);
    const ChannelSet ch = random_channels(rng, 5, 4, 3);
    const CVec ris = oracle::random_phases(rng, 5);
    const auto g = user_gains(ch, ris);
    for (std::size_t k = 0; k < 3; ++k)
    {
        CVec acc = CVec::Zero(4);
        for (Eigen::Index f = 0; f < 5; ++f)
            acc += std::conj(ch.h[k](f)) * ris(f) * ch.g.row(f).transpose();
        CHECK(g[k] == doctest::Approx(acc.squaredNorm()).epsilon(1e-12));
    }
    CHECK(min_user_gain(ch, ris) == *std::min_element(g.begin(), g.end()));
}

TEST_CASE("max-min with one RIS element is phase independent")
{
    oracle::Rng rng(2);
    const ChannelSet ch = random_channels(rng, 1, 3, 2);
    const CVec ris = ris_max_min(ch);
    CHECK(max_modulus_deviation(ris) < 1e-12);
    CHECK(min_user_gain(ch, ris) == doctest::Approx(min_user_gain(ch, CVec::Ones(1))).epsilon(1e-12));
}

TEST_CASE("max-min reaches the rank-one co-phasing optimum")
{
    oracle::Rng rng(3);
    for (int trial = 0; trial < 10; ++trial)
    {
        const ArrayGeometry ris_geom{2, 3, 0.5};
        const ArrayGeometry bs_geom{2, 2, 0.5};
        const CVec a_r = upa_response(0.3 + trial, 1.0 + 0.1 * trial, ris_geom);
        const CVec a_b = upa_response(1.7 * trial, 0.4, bs_geom);
        const double scale = 3.0;
        ChannelSet ch;
        ch.g = scale * a_r * a_b.adjoint();
        ch.h = {oracle::cn_vec(rng, 6)};
        ch.noise_powers = {1.0};
        double sum = 0.0;
        for (Eigen::Index f = 0; f < 6; ++f)
            sum += std::abs(ch.h[0](f)) * std::abs(a_r(f));
        const double optimum = sum * sum * a_b.squaredNorm() * scale * scale;
        const CVec ris = ris_max_min(ch, MaxMinOptions{.seed = static_cast<std::uint64_t>(trial)});
        CHECK(min_user_gain(ch, ris) >= 0.99 * optimum);
        CHECK(min_user_gain(ch, ris) <= optimum * (1.0 + 1e-12));
    }
}

TEST_CASE("max-min beats random phase search")
{
    oracle::Rng rng(4);
    for (int trial = 0; trial < 10; ++trial)
    {
        const ChannelSet ch = random_channels(rng, 4, 4, 2);
        double best = 0.0;
        for (int s = 0; s < 100000; ++s)
            best = std::max(best, min_user_gain(ch, oracle::random_phases(rng, 4)));
        const CVec ris = ris_max_min(ch, MaxMinOptions{.seed = static_cast<std::uint64_t>(trial)});
        CHECK(max_modulus_deviation(ris) < 1e-12);
        CHECK(min_user_gain(ch, ris) >= 0.95 * best);
    }
}

TEST_CASE("max-min output beats its own random-candidate baseline")
{
    oracle::Rng rng(5);
    for (int trial = 0; trial < 10; ++trial)
    {
        const ChannelSet ch = random_channels(rng, 8, 4, 3);
        const MaxMinOptions opt{.seed = 77};
        // Replay the candidate stream the solver draws from.
        Rng replay(77);
        std::uniform_real_distribution<double> uni(0.0, 2.0 * pi);
        double baseline = min_user_gain(ch, CVec::Ones(8));
        for (std::size_t i = 0; i < opt.random_candidates; ++i)
        {
            CVec c(8);
            for (Eigen::Index f = 0; f < 8; ++f)
                c(f) = std::polar(1.0, uni(replay));
            baseline = std::max(baseline, min_user_gain(ch, c));
        }
        CHECK(min_user_gain(ch, ris_max_min(ch, opt)) >= baseline);
    }
}

TEST_CASE("zero-forcing reference")
{
    ChannelSet ch;
    ch.g = CMat::Identity(3, 3);
    ch.h = {CVec::Unit(3, 0)};
    ch.noise_powers = {1.0};
    const ZfReference zf = zf_reference(ch, CVec::Ones(3), {1.0}, {1.0});
    CHECK((zf.f_opt - CMat(CVec::Unit(3, 0))).norm() < 1e-14);

    oracle::Rng rng(6);
    for (int trial = 0; trial < 20; ++trial)
    {
        const ChannelSet rc = random_channels(rng, 5, 4, 2 + trial % 2);
        const auto k = static_cast<Eigen::Index>(rc.h.size());
        const CVec ris = oracle::random_phases(rng, 5);
        std::vector<double> gamma(rc.h.size()), sigma2(rc.h.size());
        for (std::size_t u = 0; u < gamma.size(); ++u)
        {
            gamma[u] = 1.0 + static_cast<double>(u);
            sigma2[u] = 0.5 + 0.25 * static_cast<double>(u);
        }
        const ZfReference ref = zf_reference(rc, ris, gamma, sigma2);
        const CMat h = cascaded_channel(rc, ris);
        const CMat prod = h * ref.f_opt;
        for (Eigen::Index a = 0; a < k; ++a)
            for (Eigen::Index b = 0; b < k; ++b)
            {
                const double expected = a == b ? std::sqrt(gamma[static_cast<std::size_t>(a)] * sigma2[static_cast<std::size_t>(a)]) : 0.0;
                CHECK(std::abs(prod(a, b) - expected) < 1e-8);
            }
        for (std::size_t u = 0; u < gamma.size(); ++u)
            CHECK(sinr(u, h, ref.f_opt, sigma2[u]) == doctest::Approx(gamma[u]).epsilon(1e-6));
    }
}

TEST_CASE("zero-forcing rejects rank-deficient channels")
{
    ChannelSet ch;
    ch.g = CMat::Ones(2, 3);
    ch.h = {CVec::Ones(2), CVec::Ones(2) * 2.0};
    ch.noise_powers = {1.0, 1.0};
    CHECK_THROWS_AS(zf_reference(ch, CVec::Ones(2), {1.0, 1.0}, {1.0, 1.0}), Infeasible);
}

TEST_CASE("codebook shape and ordering")
{
    const Codebook one = build_codebook(1, 1, 1, ArrayGeometry{1, 1, 0.5});
    CHECK(one.columns.cols() == 1);
    CHECK(std::abs(one.columns(0, 0) - cplx(1.0, 0.0)) < 1e-15);

    const ArrayGeometry geom{2, 2, 0.5};
    const Codebook cb = build_codebook(2, 2, 2, geom);
    CHECK(cb.columns.cols() == 16);
    for (Eigen::Index c = 0; c < cb.columns.cols(); ++c)
        CHECK(std::abs(cb.columns.col(c).norm() - 1.0) < 1e-12);
    // Column i * (mu nz) + j is a(psi_i, phi_j) with psi_i = 2 pi i / (mu ny).
    const CVec expected = upa_response(2.0 * pi * 3.0 / 4.0, 2.0 * pi * 1.0 / 4.0, geom);
    CHECK((cb.columns.col(3 * 4 + 1) - expected).norm() < 1e-14);

    CHECK_THROWS_AS(build_codebook(1, 3, 2, geom), InvalidArgument);
    CHECK_THROWS_AS(build_codebook(0, 2, 2, geom), InvalidArgument);
}

TEST_CASE("OMP recovers planted sub-connected instances")
{
    oracle::Rng rng(7);
    const Codebook cb = small_codebook(2, 4, 4);
    std::uniform_int_distribution<Eigen::Index> pick(0, cb.columns.cols() - 1);
    for (int trial = 0; trial < 20; ++trial)
    {
        const std::size_t n = 4, d = 4;
        const Eigen::Index k = 1 + trial % 3;
        CMat a_sel = CMat::Zero(16, 4);
        for (Eigen::Index t = 0; t < 4; ++t)
            a_sel.block(t * 4, t, 4, 1) = cb.columns.col(pick(rng)).segment(t * 4, 4);
        const CMat f_opt = a_sel * oracle::cn_mat(rng, 4, k);
        const OmpResult r = omp_analog(f_opt, cb, n, d);
        REQUIRE(r.residual_history.size() == n);
        CHECK(r.residual_history.back() < 1e-8);
        for (std::size_t i = 1; i < n; ++i)
            CHECK(r.residual_history[i] <= r.residual_history[i - 1] + 1e-12);
        for (std::size_t t = 0; t < n; ++t)
        {
            const CVec planted = a_sel.block(static_cast<Eigen::Index>(t * 4), static_cast<Eigen::Index>(t), 4, 1);
            const CVec chosen = cb.columns.col(static_cast<Eigen::Index>(r.columns[t])).segment(static_cast<Eigen::Index>(t * 4), 4);
            // Several codewords can share a segment up to phase; collinearity is what counts.
            CHECK(std::abs(std::abs(planted.dot(chosen)) - planted.norm() * chosen.norm()) < 1e-10);
            CHECK(max_modulus_deviation(r.v_blocks[t]) < 1e-12);
        }
    }
}

TEST_CASE("OMP with one chain picks the best-correlated codeword")
{
    oracle::Rng rng(8);
    const Codebook cb = small_codebook(2, 2, 2);
    const CMat f_opt = oracle::cn_mat(rng, 4, 2);
    const OmpResult r = omp_analog(f_opt, cb, 1, 4);
    Eigen::Index best = 0;
    (cb.columns.adjoint() * f_opt).rowwise().squaredNorm().maxCoeff(&best);
    CHECK(r.columns[0] == static_cast<std::size_t>(best));
    CHECK(max_modulus_deviation(r.v_blocks[0]) < 1e-12);
}

TEST_CASE("OMP residual is non-increasing on arbitrary references")
{
    oracle::Rng rng(9);
    const Codebook cb = small_codebook(2, 3, 4);
    for (int trial = 0; trial < 20; ++trial)
    {
        const OmpResult r = omp_analog(oracle::cn_mat(rng, 12, 3), cb, 3, 4);
        for (std::size_t i = 1; i < r.residual_history.size(); ++i)
            CHECK(r.residual_history[i] <= r.residual_history[i - 1] + 1e-12);
        for (const auto &v : r.v_blocks)
            CHECK(max_modulus_deviation(v) < 1e-12);
    }
    CHECK_THROWS_AS(omp_analog(CMat::Ones(5, 1), cb, 3, 4), InvalidArgument);
}

TEST_CASE("digital power min: single-user closed form")
{
    CMat rows(1, 2);
    rows << 1.0, 1.0;
    const PowerMinResult r = digital_power_min(rows, {1.0}, {1.0}, 1);
    CHECK(r.power == doctest::Approx(0.5).epsilon(1e-10));
    // MRT: w is parallel to g = rows^H.
    const CVec w = r.w.col(0);
    CHECK(std::abs(std::abs(w.dot(rows.row(0).adjoint())) - w.norm() * rows.norm()) < 1e-12);
}

TEST_CASE("digital power min: vanishing targets give vanishing power")
{
    oracle::Rng rng(10);
    const CMat rows = oracle::cn_mat(rng, 2, 3);
    const PowerMinResult r = digital_power_min(rows, {1e-12, 1e-12}, {1.0, 1.0}, 2);
    CHECK(r.power < 1e-10);
}

TEST_CASE("digital power min matches the dual oracle with tight constraints")
{
    oracle::Rng rng(11);
    std::uniform_real_distribution<double> uni(0.5, 5.0);
    for (int trial = 0; trial < 15; ++trial)
    {
        const Eigen::Index n = 2 + trial % 3;
        const std::size_t d = 1 + static_cast<std::size_t>(trial % 3);
        const CMat rows = oracle::cn_mat(rng, 2, n);
        const std::vector<double> gamma{uni(rng), uni(rng)};
        const std::vector<double> sigma2{0.2 * uni(rng), 0.2 * uni(rng)};
        const PowerMinResult r = digital_power_min(rows, gamma, sigma2, d);
        const double oracle_power = static_cast<double>(d) * oracle::two_user_power_dual(rows, gamma, sigma2);
        CHECK(std::abs(r.power - oracle_power) <= 1e-3 * oracle_power);
        for (std::size_t u = 0; u < 2; ++u)
            CHECK(sinr(u, rows, r.w, sigma2[u]) == doctest::Approx(gamma[u]).epsilon(1e-6));
    }
}

TEST_CASE("digital power min declares infeasible instances")
{
    // Two users on the same one-dimensional channel cannot both reach 10 dB.
    CMat rows(2, 2);
    rows << 1.0, 0.0, 1.0, 0.0;
    CHECK_THROWS_AS(digital_power_min(rows, {10.0, 10.0}, {1.0, 1.0}, 1), Infeasible);
    CMat dead = CMat::Zero(1, 2);
    CHECK_THROWS_AS(digital_power_min(dead, {1.0}, {1.0}, 1), Infeasible);
}

TEST_CASE("individual design meets targets, is deterministic and costs more than the joint design")
{
    const SystemConfig cfg = SystemConfig::desk_scale();
    std::vector<double> gaps;
    for (std::uint64_t s = 0; s < 4; ++s)
    {
        const ChannelSet ch = generate_scenario(cfg, 100 + s);
        const BeamformingSolution a = individual_solve(cfg, ch, s);
        const BeamformingSolution b = individual_solve(cfg, ch, s);
        CHECK(a.w == b.w);
        CHECK(a.ris == b.ris);
        CHECK(min_sinr_margin_db(a, ch, cfg.gamma) >= -0.1);
        const PenaltyResult joint = penalty_solve(cfg, ch, s);
        if (joint.converged)
            gaps.push_back(linear_to_db(transmit_power(a.w, cfg.d()) / transmit_power(joint.solution.w, cfg.d())));
    }
    REQUIRE(!gaps.empty());
    std::sort(gaps.begin(), gaps.end());
    CHECK(gaps[gaps.size() / 2] >= 0.0);
}

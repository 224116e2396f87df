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
#include "risbf/manifold_opt.hpp"

using namespace risbf;

namespace
{
    QuadraticUnitModulusObjective random_objective(oracle::Rng &rng, Eigen::Index l, Eigen::Index terms)
    {
        return QuadraticUnitModulusObjective(oracle::cn_mat(rng, l, terms), oracle::cn_vec(rng, terms));
    }

    // Direct evaluation: sum_i |u^H c_i - t_i|^2.
    double direct_value(const CMat &c, const CVec &t, const CVec &u)
    {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < c.cols(); ++i)
            acc += std::norm(u.dot(c.col(i)) - t(i));
        return acc;
    }
} // namespace

TEST_CASE("tangent_project worked values")
{
    CVec u(1), z(1);
    u << 1.0;
    z << 1.0;
    CHECK(std::abs(tangent_project(u, z)(0)) < 1e-15);
    z << cplx(0.0, 1.0);
    CHECK(std::abs(tangent_project(u, z)(0) - cplx(0.0, 1.0)) < 1e-15);
}

TEST_CASE("tangent_project output is tangent")
{
    oracle::Rng rng(4);
    for (int trial = 0; trial < 100; ++trial)
    {
        const CVec u = oracle::random_phases(rng, 1 + trial % 9);
        const CVec z = oracle::cn_vec(rng, u.size(), 4.0);
        const CVec p = tangent_project(u, z);
        for (Eigen::Index i = 0; i < u.size(); ++i)
            CHECK(std::abs((p(i) * std::conj(u(i))).real()) < 1e-12);
    }
}

TEST_CASE("tangent_project rejects off-manifold base points")
{
    CVec u(2), z(2);
    u << 1.0, 1.1;
    z << 1.0, 1.0;
    CHECK_THROWS_AS(tangent_project(u, z), InvalidArgument);
}

TEST_CASE("retraction lands on the manifold")
{
    oracle::Rng rng(8);
    for (int trial = 0; trial < 100; ++trial)
    {
        const CVec u = oracle::random_phases(rng, 7);
        const CVec step = tangent_project(u, oracle::cn_vec(rng, 7, 9.0));
        CHECK(max_modulus_deviation(retract(u, step)) < 1e-12);
    }
}

TEST_CASE("euclidean gradient worked values")
{
    QuadraticUnitModulusObjective obj(1);
    CVec c(1), u(1);
    c << 1.0;
    u << 1.0;
    obj.add_term(c, 0.0);
    CHECK(std::abs(obj.euclidean_gradient(u)(0) - cplx(2.0, 0.0)) < 1e-15);

    oracle::Rng rng(12);
    const CVec b = oracle::random_phases(rng, 5);
    const CMat coeffs = oracle::cn_mat(rng, 5, 4);
    CVec t(4);
    for (Eigen::Index i = 0; i < 4; ++i)
        t(i) = b.dot(coeffs.col(i));
    const QuadraticUnitModulusObjective planted(coeffs, t);
    CHECK(planted.value(b) < 1e-24);
    CHECK(planted.euclidean_gradient(b).norm() < 1e-12);
}

TEST_CASE("objective value matches direct evaluation")
{
    oracle::Rng rng(13);
    for (int trial = 0; trial < 50; ++trial)
    {
        const CMat c = oracle::cn_mat(rng, 6, 1 + trial % 9);
        const CVec t = oracle::cn_vec(rng, c.cols());
        const QuadraticUnitModulusObjective obj(c, t);
        const CVec u = oracle::random_phases(rng, 6);
        const double ref = direct_value(c, t, u);
        CHECK(std::abs(obj.value(u) - ref) < 1e-12 * (1.0 + ref));
    }
}

TEST_CASE("euclidean gradient matches central finite differences")
{
    oracle::Rng rng(14);
    for (int trial = 0; trial < 30; ++trial)
    {
        const Eigen::Index l = 1 + trial % 8;
        const auto obj = random_objective(rng, l, 1 + trial % 9);
        const CVec x = oracle::cn_vec(rng, l); // the formula holds off the manifold too
        const CVec fd = oracle::fd_gradient([&](const CVec &p) { return obj.value(p); }, x);
        const CVec g = obj.euclidean_gradient(x);
        CHECK((g - fd).norm() <= 1e-6 * std::max(1.0, g.norm()));
    }
}

TEST_CASE("rcg: single term on the circle converges to the unique minimiser")
{
    QuadraticUnitModulusObjective obj(1);
    CVec c(1), b0(1);
    c << 1.0;
    b0 << -1.0;
    obj.add_term(c, 1.0);
    // From the antipode the Riemannian gradient vanishes; nudge the start.
    b0 << std::polar(1.0, pi - 1e-3);
    const RcgResult r = rcg_minimize(obj, b0, RcgOptions{.max_iters = 500, .grad_tol = 1e-12});
    CHECK(std::abs(r.point(0) - cplx(1.0, 0.0)) < 1e-6);
    CHECK(r.objective < 1e-12);
}

TEST_CASE("rcg: exact antipodal start is returned unchanged")
{
    QuadraticUnitModulusObjective obj(1);
    CVec c(1), b0(1);
    c << 1.0;
    b0 << -1.0;
    obj.add_term(c, 1.0);
    const RcgResult r = rcg_minimize(obj, b0);
    CHECK(r.iterations == 0);
    CHECK(r.point == b0);
}

TEST_CASE("rcg: planted optimum start is returned unchanged")
{
    oracle::Rng rng(15);
    const CVec b = oracle::random_phases(rng, 6);
    const CMat coeffs = oracle::cn_mat(rng, 6, 5);
    CVec t(5);
    for (Eigen::Index i = 0; i < 5; ++i)
        t(i) = b.dot(coeffs.col(i));
    const RcgResult r = rcg_minimize(QuadraticUnitModulusObjective(coeffs, t), b);
    CHECK(r.iterations == 0);
    CHECK((r.point - b).norm() < 1e-15);
}

TEST_CASE("rcg: L=2 with 3 terms beats 1e6 random samples")
{
    oracle::Rng rng(16);
    const CMat pool = oracle::random_search_pool(rng, 2, 1000000);
    for (int trial = 0; trial < 10; ++trial)
    {
        const CMat c = oracle::cn_mat(rng, 2, 3);
        const CVec t = oracle::cn_vec(rng, 3);
        const QuadraticUnitModulusObjective obj(c, t);
        const RcgResult r = rcg_minimize(obj, oracle::random_phases(rng, 2), RcgOptions{.max_iters = 500, .grad_tol = 1e-12});
        CHECK(r.objective <= oracle::random_search_min(c, t, pool) + 1e-6);
    }
}

TEST_CASE("rcg trace properties")
{
    oracle::Rng rng(17);
    for (int trial = 0; trial < 100; ++trial)
    {
        const Eigen::Index l = 1 + trial % 16;
        const auto obj = random_objective(rng, l, 1 + trial % 9);
        const CVec b0 = oracle::random_phases(rng, l);
        RcgOptions opt;
        opt.record_trace = true;
        const RcgResult r = rcg_minimize(obj, b0, opt);
        const auto &tr = r.trace;
        REQUIRE(!tr.objective.empty());
        CHECK(r.objective <= obj.value(b0));
        CHECK(max_modulus_deviation(r.point) < 1e-12);
        for (std::size_t i = 0; i < tr.objective.size(); ++i)
        {
            CHECK(tr.modulus_deviation[i] < 1e-12);
            CHECK(tr.tangent_residual[i] < 1e-10 * std::max(1.0, tr.grad_norm[i]));
            if (i > 0)
                CHECK(tr.objective[i] <= tr.objective[i - 1] + 1e-12);
        }
    }
}

TEST_CASE("conjugate direction resets to steepest descent when not a descent direction")
{
    CVec u(1), grad(1), prev_grad(1), prev_dir(1);
    u << 1.0;
    grad << cplx(0.0, 1.0);
    prev_grad << cplx(0.0, 0.1);
    prev_dir << cplx(0.0, 1.0); // beta = 90 makes -grad + beta * prev_dir point uphill
    const auto cd = conjugate_direction(u, grad, prev_grad, prev_dir);
    CHECK(cd.reset);
    CHECK((cd.direction + grad).norm() < 1e-15);

    prev_dir << cplx(0.0, -1.0);
    const auto ok = conjugate_direction(u, grad, prev_grad, prev_dir);
    CHECK_FALSE(ok.reset);
    CHECK(ok.direction.dot(grad).real() < 0.0);
}

TEST_CASE("conjugate directions are always descent directions inside rcg")
{
    oracle::Rng rng(18);
    for (int trial = 0; trial < 50; ++trial)
    {
        const Eigen::Index l = 2 + trial % 10;
        const auto obj = random_objective(rng, l, 3 + trial % 7);
        CVec u = oracle::random_phases(rng, l);
        CVec grad = tangent_project(u, obj.euclidean_gradient(u));
        CVec dir = -grad;
        for (int it = 0; it < 20 && grad.norm() > 1e-10; ++it)
        {
            const CVec next = retract(u, (0.05 / grad.norm()) * dir);
            const CVec ng = tangent_project(next, obj.euclidean_gradient(next));
            const auto cd = conjugate_direction(next, ng, grad, dir);
            CHECK(cd.direction.dot(ng).real() <= 0.0);
            u = next;
            grad = ng;
            dir = cd.direction;
        }
    }
}

TEST_CASE("rcg rejects bad inputs")
{
    QuadraticUnitModulusObjective obj(2);
    CVec bad(2);
    bad << 1.0, 0.5;
    CHECK_THROWS_AS(rcg_minimize(obj, bad), InvalidArgument);
    CHECK_THROWS_AS(rcg_minimize(obj, CVec::Ones(3)), InvalidArgument);
    CHECK_THROWS_AS(obj.add_term(CVec::Ones(3), 0.0), InvalidArgument);
    RcgOptions opt;
    opt.armijo_c = 1.5;
    CHECK_THROWS_AS(rcg_minimize(obj, CVec::Ones(2), opt), InvalidArgument);

    CMat c = CMat::Ones(2, 1);
    CVec t(1);
    t << cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
    CHECK_THROWS_AS(rcg_minimize(QuadraticUnitModulusObjective(c, t), CVec::Ones(2)), NumericalError);
}

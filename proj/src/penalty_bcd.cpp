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

#include "risbf/penalty_bcd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "risbf/channel_model.hpp"

namespace risbf
{
    namespace
    {
        CMat effective_rows(const ChannelSet &channels, const BeamformingSolution &solution)
        {
            return cascaded_channel(channels, solution.ris) * assemble_analog(solution.v_blocks);
        }

        CVec random_phases(std::size_t len, Rng &rng)
        {
            std::uniform_real_distribution<double> uni(0.0, 2.0 * pi);
            CVec out(static_cast<Eigen::Index>(len));
            for (Eigen::Index i = 0; i < out.size(); ++i)
                out(i) = std::polar(1.0, uni(rng));
            return out;
        }

        void check_state(const ChannelSet &channels, const PenaltyState &state)
        {
            const auto k = static_cast<Eigen::Index>(channels.num_users());
            if (state.t.rows() != k || state.t.cols() != k)
                throw InvalidArgument("auxiliary matrix must be K x K");
            if (!(state.rho > 0.0))
                throw InvalidArgument("penalty factor must be positive");
        }

        double relative_increase(double before, double after)
        {
            return (after - before) / std::max(std::abs(before), 1e-300);
        }
    } // namespace

    double penalized_objective(const CMat &rows, const CMat &w, std::size_t d, const PenaltyState &state)
    {
        return transmit_power(w, d) + 0.5 * state.rho * (rows * w - state.t).squaredNorm();
    }

    double penalized_objective(const ChannelSet &channels, const BeamformingSolution &solution, const PenaltyState &state)
    {
        solution.validate(channels);
        check_state(channels, state);
        return penalized_objective(effective_rows(channels, solution), solution.w, solution.chain_size(), state);
    }

    CMat update_digital(const CMat &rows, std::size_t d, const PenaltyState &state)
    {
        const auto n = rows.cols();
        CMat a = state.rho * (rows.adjoint() * rows);
        a.diagonal().array() += 2.0 * static_cast<double>(d);
        const CMat rhs = state.rho * (rows.adjoint() * state.t);
        Eigen::LLT<CMat> llt(a);
        if (llt.info() != Eigen::Success)
            throw NumericalError("digital update system is not positive definite");
        CMat w = llt.solve(rhs);
        if (!w.allFinite() || w.rows() != n)
            throw NumericalError("digital update produced non-finite values");
        return w;
    }

    CMat update_digital(const ChannelSet &channels, const BeamformingSolution &solution, const PenaltyState &state)
    {
        solution.validate(channels);
        check_state(channels, state);
        return update_digital(effective_rows(channels, solution), solution.chain_size(), state);
    }

    QuadraticUnitModulusObjective theta_objective(const ChannelSet &channels, const BeamformingSolution &solution,
                                                  const PenaltyState &state)
    {
        solution.validate(channels);
        check_state(channels, state);
        const auto k = static_cast<Eigen::Index>(channels.num_users());
        const CMat gvw = channels.g * (assemble_analog(solution.v_blocks) * solution.w); // F x K
        CMat coeffs(channels.g.rows(), k * k);
        CVec targets(k * k);
        for (Eigen::Index u = 0; u < k; ++u)
        {
            const CVec hc = channels.h[static_cast<std::size_t>(u)].conjugate();
            for (Eigen::Index j = 0; j < k; ++j)
            {
                coeffs.col(u * k + j) = hc.cwiseProduct(gvw.col(j));
                targets(u * k + j) = state.t(u, j);
            }
        }
        return {std::move(coeffs), std::move(targets)};
    }

    QuadraticUnitModulusObjective analog_objective(const ChannelSet &channels, const BeamformingSolution &solution,
                                                   const PenaltyState &state)
    {
        solution.validate(channels);
        check_state(channels, state);
        const auto k = static_cast<Eigen::Index>(channels.num_users());
        const auto n = solution.w.rows();
        const auto d = static_cast<Eigen::Index>(solution.chain_size());
        // Row k is conj(ris)^H diag(h_k^H) G.
        const CMat bg = cascaded_channel(channels, solution.ris);
        CMat coeffs(bg.cols(), k * k);
        CVec targets(k * k);
        for (Eigen::Index u = 0; u < k; ++u)
            for (Eigen::Index j = 0; j < k; ++j)
            {
                // d_{k,j} = bg_k Z_j; the manifold form needs c = d^H and target conj(t).
                CVec c(bg.cols());
                for (Eigen::Index nn = 0; nn < n; ++nn)
                    c.segment(nn * d, d) = (bg.row(u).segment(nn * d, d) * solution.w(nn, j)).adjoint();
                coeffs.col(u * k + j) = c;
                targets(u * k + j) = std::conj(state.t(u, j));
            }
        return {std::move(coeffs), std::move(targets)};
    }

    CVec update_theta(const ChannelSet &channels, const BeamformingSolution &solution, const PenaltyState &state,
                      const RcgOptions &options)
    {
        // The manifold variable is conj(ris): u^H c_{k,j} = h_k^H Theta G V w_j.
        const auto obj = theta_objective(channels, solution, state);
        const RcgResult r = rcg_minimize(obj, solution.ris.conjugate(), options);
        return r.point.conjugate();
    }

    std::vector<CVec> update_analog(const ChannelSet &channels, const BeamformingSolution &solution,
                                    const PenaltyState &state, const RcgOptions &options)
    {
        const auto obj = analog_objective(channels, solution, state);
        const RcgResult r = rcg_minimize(obj, stack_x(solution.v_blocks), options);
        return unstack_x(r.point, solution.num_chains(), solution.chain_size());
    }

    CVec project_sinr_row(const CVec &a, std::size_t k, double gamma, double sigma2)
    {
        const auto kk = static_cast<Eigen::Index>(k);
        if (kk >= a.size())
            throw InvalidArgument("user index out of range");
        if (!(gamma > 0.0) || !(sigma2 > 0.0))
            throw InvalidArgument("SINR target and noise power must be positive");

        const double ak2 = std::norm(a(kk));
        const double interference = a.squaredNorm() - ak2;
        if (ak2 >= gamma * (interference + sigma2))
            return a;

        CVec t = a;
        if (ak2 == 0.0)
        {
            // Multiplier at 1: interference shrinks by 1 / (1 + gamma), t_k sits on
            // the boundary with phase 0.
            for (Eigen::Index j = 0; j < a.size(); ++j)
                if (j != kk)
                    t(j) = a(j) / (1.0 + gamma);
            t(kk) = 0.0;
            t(kk) = std::sqrt(gamma * (t.squaredNorm() + sigma2));
            return t;
        }

        // Stationarity: t_j = a_j / (1 + lambda gamma), t_k = a_k / (1 - lambda).
        // Bisect on s = 1 - lambda; the residual is decreasing in s.
        const double abs_ak = std::sqrt(ak2);
        auto residual = [&](double s) {
            const double shrink = 1.0 + gamma * (1.0 - s);
            return ak2 / (s * s) - gamma * (interference / (shrink * shrink) + sigma2);
        };
        double lo = abs_ak / std::sqrt(gamma * (interference + sigma2));
        const double shrink_max = 1.0 + gamma;
        double hi = std::min(1.0, abs_ak / std::sqrt(gamma * (interference / (shrink_max * shrink_max) + sigma2)));
        lo = std::min(lo, hi);
        bool done = false;
        for (int it = 0; it < 200; ++it)
        {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi)
            {
                done = true;
                break;
            }
            if (residual(mid) > 0.0)
                lo = mid;
            else
                hi = mid;
            if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi)
            {
                done = true;
                break;
            }
        }
        const double s = 0.5 * (lo + hi);
        if (!done || !std::isfinite(s) || !(s > 0.0))
            throw NumericalError("SINR projection multiplier search did not converge");

        const double lambda = 1.0 - s;
        for (Eigen::Index j = 0; j < a.size(); ++j)
            if (j != kk)
                t(j) = a(j) / (1.0 + lambda * gamma);
        t(kk) = 0.0;
        // Land exactly on the boundary along a_k's phase.
        const double boundary = std::sqrt(gamma * (t.squaredNorm() + sigma2));
        t(kk) = a(kk) / abs_ak * boundary;
        if (!t.allFinite())
            throw NumericalError("SINR projection produced non-finite values");
        const double rel = std::abs(std::norm(t(kk)) - std::norm(a(kk)) / (s * s)) / std::max(ak2 / (s * s), 1e-300);
        if (rel > 1e-6)
            throw NumericalError("SINR projection residual too large");
        return t;
    }

    CMat update_t(const CMat &products, const std::vector<double> &gamma, const std::vector<double> &sigma2)
    {
        const auto k = products.rows();
        if (products.cols() != k || gamma.size() != static_cast<std::size_t>(k) ||
            sigma2.size() != static_cast<std::size_t>(k))
            throw InvalidArgument("update_t dimension mismatch");
        CMat t(k, k);
        for (Eigen::Index u = 0; u < k; ++u)
        {
            const CVec row = products.row(u).transpose();
            t.row(u) = project_sinr_row(row, static_cast<std::size_t>(u), gamma[static_cast<std::size_t>(u)],
                                        sigma2[static_cast<std::size_t>(u)])
                           .transpose();
        }
        return t;
    }

    CMat update_t(const ChannelSet &channels, const BeamformingSolution &solution, const std::vector<double> &gamma)
    {
        solution.validate(channels);
        return update_t(effective_rows(channels, solution) * solution.w, gamma, channels.noise_powers);
    }

    double stopping_indicator(const CMat &rows, const CMat &w, const PenaltyState &state)
    {
        return (rows * w - state.t).cwiseAbs2().maxCoeff();
    }

    double stopping_indicator(const ChannelSet &channels, const BeamformingSolution &solution, const PenaltyState &state)
    {
        solution.validate(channels);
        check_state(channels, state);
        return stopping_indicator(effective_rows(channels, solution), solution.w, state);
    }

    NormalizedChannels normalize_channels(const ChannelSet &channels)
    {
        channels.validate();
        NormalizedChannels out;
        out.channels.h.reserve(channels.num_users());
        double mean_gain = 0.0;
        const double g2 = channels.g.squaredNorm();
        for (std::size_t u = 0; u < channels.num_users(); ++u)
        {
            out.channels.h.push_back(channels.h[u] / std::sqrt(channels.noise_powers[u]));
            mean_gain += out.channels.h.back().squaredNorm() * g2;
        }
        mean_gain /= static_cast<double>(channels.num_users());
        if (!(mean_gain > 0.0) || !std::isfinite(mean_gain))
            throw InvalidArgument("channel gain is zero or not finite");
        out.scale = std::sqrt(mean_gain);
        out.channels.g = channels.g / out.scale;
        out.channels.noise_powers.assign(channels.num_users(), 1.0);
        return out;
    }

    PenaltyResult penalty_solve(const SystemConfig &config, const ChannelSet &channels, std::uint64_t init_seed,
                                const PenaltyOptions &options)
    {
        config.validate();
        channels.validate();
        if (channels.num_antennas() != config.m || channels.num_elements() != config.f() ||
            channels.num_users() != config.k)
            throw InvalidArgument("channel dimensions do not match the configuration");

        const NormalizedChannels norm = normalize_channels(channels);
        const ChannelSet &ch = norm.channels;
        const std::size_t k = config.k;
        const std::size_t d = config.d();
        const std::vector<double> unit_noise(k, 1.0);

        Rng rng(init_seed);
        PenaltyResult res;
        res.diagnostics.channel_scale = norm.scale;
        BeamformingSolution &sol = res.solution;
        PenaltyState &state = res.state;

        sol.v_blocks.resize(config.n);
        for (auto &v : sol.v_blocks)
            v = random_phases(d, rng);
        sol.ris = random_phases(config.f(), rng);
        if (options.initial_ris)
        {
            if (static_cast<std::size_t>(options.initial_ris->size()) != config.f() ||
                max_modulus_deviation(*options.initial_ris) > 1e-8)
                throw InvalidArgument("initial RIS phases must be unit modulus of length F");
            sol.ris = unit_modulus(*options.initial_ris);
        }

        std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
        state.t.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
        for (Eigen::Index i = 0; i < state.t.size(); ++i)
        {
            const double re = normal(rng);
            const double im = normal(rng);
            state.t(i) = cplx(re, im);
        }
        state.t = update_t(state.t, config.gamma, unit_noise);
        state.rho = config.rho0;

        CMat rows = effective_rows(ch, sol);
        sol.w = update_digital(rows, d, state);
        double obj = penalized_objective(rows, sol.w, d, state);

        auto note = [&](std::size_t block, double before, double after) {
            auto &slot = res.diagnostics.max_block_increase[block];
            slot = std::max(slot, relative_increase(before, after));
        };

        for (std::size_t outer = 1; outer <= config.max_outer; ++outer)
        {
            state.outer_iters = outer;
            for (std::size_t inner = 0; inner < config.max_inner; ++inner)
            {
                const double start = obj;

                sol.w = update_digital(rows, d, state);
                double next = penalized_objective(rows, sol.w, d, state);
                note(0, obj, next);
                obj = next;

                if (options.update_theta)
                {
                    sol.ris = update_theta(ch, sol, state, options.rcg);
                    rows = effective_rows(ch, sol);
                    next = penalized_objective(rows, sol.w, d, state);
                    note(1, obj, next);
                    obj = next;
                }

                if (options.update_analog)
                {
                    sol.v_blocks = update_analog(ch, sol, state, options.rcg);
                    rows = effective_rows(ch, sol);
                    next = penalized_objective(rows, sol.w, d, state);
                    note(2, obj, next);
                    obj = next;
                }

                state.t = update_t(rows * sol.w, config.gamma, unit_noise);
                next = penalized_objective(rows, sol.w, d, state);
                note(3, obj, next);
                obj = next;

                ++state.inner_iters;
                state.objective_trace.push_back(obj);
                if (std::abs(start - obj) <= config.eps1 * std::max(std::abs(start), 1e-300))
                    break;
            }

            state.xi = stopping_indicator(rows, sol.w, state);
            res.diagnostics.trace.push_back({outer, state.rho, obj, state.xi});
            res.diagnostics.xi_trace.push_back(state.xi);
            if (state.xi < config.eps2)
            {
                res.converged = true;
                break;
            }
            state.rho /= config.c;
            obj = penalized_objective(rows, sol.w, d, state);
        }
        res.diagnostics.total_inner = state.inner_iters;

        sol.w /= norm.scale;
        return res;
    }
} // namespace risbf

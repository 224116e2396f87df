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

#include "risbf/individual_design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace risbf
{
    namespace
    {
        // Smoothed minimum of the cascaded gains, negated so that RCG minimizes
        //   (1 / tau) log sum_k exp(-tau g_k(u) / g_ref),   g_k(u) = u^H R_k u,
        // with u = conj(ris) and R_k = diag(h_k^H) G G^H diag(h_k).
        class SoftMinGain final : public UnitModulusObjective
        {
        public:
            SoftMinGain(const std::vector<CMat> &gram, double g_ref, double tau)
                : gram_(gram), g_ref_(g_ref), tau_(tau)
            {
            }

            std::size_t dimension() const override { return static_cast<std::size_t>(gram_.front().rows()); }

            double value(const CVec &u) const override
            {
                const RVec g = scaled_gains(u);
                const double lo = g.minCoeff();
                double acc = 0.0;
                for (Eigen::Index k = 0; k < g.size(); ++k)
                    acc += std::exp(-tau_ * (g(k) - lo));
                return -lo + std::log(acc) / tau_;
            }

            CVec euclidean_gradient(const CVec &u) const override
            {
                const RVec g = scaled_gains(u);
                const double lo = g.minCoeff();
                RVec weights(g.size());
                for (Eigen::Index k = 0; k < g.size(); ++k)
                    weights(k) = std::exp(-tau_ * (g(k) - lo));
                weights /= weights.sum();
                CVec grad = CVec::Zero(u.size());
                for (std::size_t k = 0; k < gram_.size(); ++k)
                    grad -= (2.0 * weights(static_cast<Eigen::Index>(k)) / g_ref_) * (gram_[k] * u);
                return grad;
            }

        private:
            RVec scaled_gains(const CVec &u) const
            {
                RVec g(static_cast<Eigen::Index>(gram_.size()));
                for (std::size_t k = 0; k < gram_.size(); ++k)
                    g(static_cast<Eigen::Index>(k)) = u.dot(gram_[k] * u).real() / g_ref_;
                return g;
            }

            const std::vector<CMat> &gram_;
            double g_ref_;
            double tau_;
        };

        CVec random_phases(std::size_t len, Rng &rng)
        {
            std::uniform_real_distribution<double> uni(0.0, 2.0 * pi);
            CVec out(static_cast<Eigen::Index>(len));
            for (Eigen::Index i = 0; i < out.size(); ++i)
                out(i) = std::polar(1.0, uni(rng));
            return out;
        }
    } // namespace

    std::vector<double> user_gains(const ChannelSet &channels, const CVec &ris)
    {
        if (ris.size() != channels.g.rows())
            throw InvalidArgument("RIS vector length must equal the element count");
        const CMat casc = cascaded_channel(channels, ris);
        std::vector<double> out(channels.num_users());
        for (std::size_t k = 0; k < out.size(); ++k)
            out[k] = casc.row(static_cast<Eigen::Index>(k)).squaredNorm();
        return out;
    }

    double min_user_gain(const ChannelSet &channels, const CVec &ris)
    {
        const auto g = user_gains(channels, ris);
        return *std::min_element(g.begin(), g.end());
    }

    CVec ris_max_min(const ChannelSet &channels, const MaxMinOptions &options)
    {
        channels.validate();
        const std::size_t f = channels.num_elements();

        std::vector<CMat> gram;
        gram.reserve(channels.num_users());
        double g_ref = std::numeric_limits<double>::infinity();
        for (const auto &h : channels.h)
        {
            const CMat c = h.conjugate().asDiagonal() * channels.g; // F x M
            gram.push_back(c * c.adjoint());
            g_ref = std::min(g_ref, gram.back().trace().real());
        }
        if (!(g_ref > 0.0))
            return CVec::Ones(static_cast<Eigen::Index>(f)); // some user sees no channel through the RIS

        Rng rng(options.seed);
        CVec best = CVec::Ones(static_cast<Eigen::Index>(f));
        double best_gain = min_user_gain(channels, best);
        for (std::size_t i = 0; i < options.random_candidates; ++i)
        {
            CVec cand = random_phases(f, rng);
            const double gain = min_user_gain(channels, cand);
            if (gain > best_gain)
            {
                best_gain = gain;
                best = std::move(cand);
            }
        }

        // Continuation over tau, warm-starting each round from the previous one.
        CVec u = best.conjugate();
        for (double tau : options.tau_schedule)
        {
            const SoftMinGain obj(gram, g_ref, tau);
            u = rcg_minimize(obj, u, options.rcg).point;
            const CVec ris = u.conjugate();
            const double gain = min_user_gain(channels, ris);
            if (gain > best_gain)
            {
                best_gain = gain;
                best = ris;
            }
        }
        return best;
    }

    ZfReference zf_reference(const ChannelSet &channels, const CVec &ris, const std::vector<double> &gamma,
                             const std::vector<double> &sigma2)
    {
        const std::size_t k = channels.num_users();
        if (gamma.size() != k || sigma2.size() != k)
            throw InvalidArgument("one SINR target and noise power per user required");
        const CMat h = cascaded_channel(channels, ris); // K x M
        Eigen::JacobiSVD<CMat> svd(h);
        const RVec sv = svd.singularValues();
        if (sv.size() < static_cast<Eigen::Index>(k) || !(sv(sv.size() - 1) > 1e-12 * sv(0)))
            throw Infeasible("cascaded channel is rank deficient; zero-forcing is undefined");

        RVec amp(static_cast<Eigen::Index>(k));
        for (std::size_t u = 0; u < k; ++u)
            amp(static_cast<Eigen::Index>(u)) = std::sqrt(gamma[u] * sigma2[u]);
        const CMat gram = h * h.adjoint();
        const CMat inv_amp = gram.ldlt().solve(CMat(amp.cast<cplx>().asDiagonal()));
        return {h.adjoint() * inv_amp};
    }

    Codebook build_codebook(std::size_t mu, std::size_t ny, std::size_t nz, const ArrayGeometry &bs_geom)
    {
        if (mu == 0 || ny == 0 || nz == 0)
            throw InvalidArgument("codebook parameters must be positive");
        if (ny * nz != bs_geom.size())
            throw InvalidArgument("codebook grid ny * nz must equal the BS antenna count");
        Codebook cb{mu, ny, nz, CMat(static_cast<Eigen::Index>(bs_geom.size()), static_cast<Eigen::Index>(mu * mu * ny * nz))};
        const std::size_t n_psi = mu * ny;
        const std::size_t n_phi = mu * nz;
        for (std::size_t i = 0; i < n_psi; ++i)
        {
            const double psi = 2.0 * pi * static_cast<double>(i) / static_cast<double>(n_psi);
            for (std::size_t j = 0; j < n_phi; ++j)
            {
                const double phi = 2.0 * pi * static_cast<double>(j) / static_cast<double>(n_phi);
                cb.columns.col(static_cast<Eigen::Index>(i * n_phi + j)) = upa_response(psi, phi, bs_geom);
            }
        }
        return cb;
    }

    OmpResult omp_analog(const CMat &f_opt, const Codebook &codebook, std::size_t n, std::size_t d)
    {
        const auto m = static_cast<Eigen::Index>(n * d);
        if (n == 0 || d == 0)
            throw InvalidArgument("OMP needs at least one chain and one antenna per chain");
        if (f_opt.rows() != m || codebook.columns.rows() != m)
            throw InvalidArgument("OMP dimension mismatch: reference and codebook must have N * D rows");

        const auto dd = static_cast<Eigen::Index>(d);
        const CMat &a = codebook.columns;
        std::vector<bool> assigned(n, false);
        std::vector<std::size_t> column_of(n, 0);
        OmpResult res;
        CMat residual = f_opt;
        CMat a_sel(m, 0);

        for (std::size_t step = 0; step < n; ++step)
        {
            double best = -1.0;
            std::size_t best_chain = 0;
            Eigen::Index best_col = 0;
            for (std::size_t t = 0; t < n; ++t)
            {
                if (assigned[t])
                    continue;
                const auto r0 = static_cast<Eigen::Index>(t) * dd;
                // correlation of every masked codeword with the chain's residual rows
                const CMat corr = a.middleRows(r0, dd).adjoint() * residual.middleRows(r0, dd);
                const RVec score = corr.rowwise().squaredNorm();
                Eigen::Index idx = 0;
                const double s = score.maxCoeff(&idx);
                if (s > best)
                {
                    best = s;
                    best_chain = t;
                    best_col = idx;
                }
            }
            assigned[best_chain] = true;
            column_of[best_chain] = static_cast<std::size_t>(best_col);
            res.chain_order.push_back(best_chain);

            CVec masked = CVec::Zero(m);
            const auto r0 = static_cast<Eigen::Index>(best_chain) * dd;
            masked.segment(r0, dd) = a.col(best_col).segment(r0, dd);
            a_sel.conservativeResize(Eigen::NoChange, a_sel.cols() + 1);
            a_sel.col(a_sel.cols() - 1) = masked;

            const CMat f_bb = a_sel.completeOrthogonalDecomposition().solve(f_opt);
            residual = f_opt - a_sel * f_bb;
            res.residual_history.push_back(residual.norm());
            if (step + 1 == n)
            {
                res.f_bb = CMat::Zero(static_cast<Eigen::Index>(n), f_opt.cols());
                for (std::size_t s = 0; s < n; ++s)
                    res.f_bb.row(static_cast<Eigen::Index>(res.chain_order[s])) = f_bb.row(static_cast<Eigen::Index>(s));
            }
        }

        res.columns = column_of;
        res.v_blocks.resize(n);
        for (std::size_t t = 0; t < n; ++t)
            res.v_blocks[t] = unit_modulus(
                CVec(a.col(static_cast<Eigen::Index>(column_of[t])).segment(static_cast<Eigen::Index>(t) * dd, dd)));
        return res;
    }

    PowerMinResult digital_power_min(const CMat &effective_rows, const std::vector<double> &gamma,
                                     const std::vector<double> &sigma2, std::size_t d, const PowerMinOptions &options)
    {
        const auto k = effective_rows.rows();
        const auto n = effective_rows.cols();
        if (gamma.size() != static_cast<std::size_t>(k) || sigma2.size() != static_cast<std::size_t>(k))
            throw InvalidArgument("one SINR target and noise power per user required");
        for (Eigen::Index u = 0; u < k; ++u)
            if (!(gamma[static_cast<std::size_t>(u)] > 0.0) || !(sigma2[static_cast<std::size_t>(u)] > 0.0))
                throw InvalidArgument("SINR targets and noise powers must be positive");

        // Noise-whitened channels as columns: g_k = rows(k, :)^H / sigma_k.
        CMat g(n, k);
        for (Eigen::Index u = 0; u < k; ++u)
            g.col(u) = effective_rows.row(u).adjoint() / std::sqrt(sigma2[static_cast<std::size_t>(u)]);

        const CMat eye = CMat::Identity(n, n);
        RVec q = RVec::Zero(k);
        PowerMinResult res;
        bool converged = false;
        for (std::size_t it = 0; it < options.max_iters; ++it)
        {
            res.iterations = it + 1;
            RVec next(k);
            for (Eigen::Index u = 0; u < k; ++u)
            {
                CMat cov = eye;
                for (Eigen::Index j = 0; j < k; ++j)
                    if (j != u)
                        cov.noalias() += q(j) * g.col(j) * g.col(j).adjoint();
                const double quad = g.col(u).dot(cov.ldlt().solve(g.col(u))).real();
                if (!(quad > 0.0))
                    throw Infeasible("user has no effective channel; SINR target unreachable");
                next(u) = gamma[static_cast<std::size_t>(u)] / quad;
            }
            if (!next.allFinite() || next.sum() > 1e300)
                throw Infeasible("uplink power iteration diverged");
            const double change = ((next - q).array().abs() / next.array().max(1e-300)).maxCoeff();
            q = next;
            if (change < options.tol)
            {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw Infeasible("uplink power iteration did not converge; targets likely infeasible");

        // MMSE receive directions of the dual uplink are the downlink beam directions.
        CMat cov = eye;
        for (Eigen::Index j = 0; j < k; ++j)
            cov.noalias() += q(j) * g.col(j) * g.col(j).adjoint();
        CMat dirs = cov.ldlt().solve(g);
        for (Eigen::Index u = 0; u < k; ++u)
            dirs.col(u).normalize();

        // Downlink powers making every SINR constraint tight.
        const CMat gains = g.adjoint() * dirs; // (k, j) -> g_k^H u_j
        Eigen::MatrixXd psi(k, k);
        for (Eigen::Index u = 0; u < k; ++u)
            for (Eigen::Index j = 0; j < k; ++j)
                psi(u, j) = u == j ? std::norm(gains(u, u)) / gamma[static_cast<std::size_t>(u)] : -std::norm(gains(u, j));
        const RVec p = psi.partialPivLu().solve(RVec::Ones(k));
        if (!p.allFinite() || (p.array() <= 0.0).any())
            throw Infeasible("downlink power allocation is infeasible");

        res.w = dirs * p.cwiseSqrt().cast<cplx>().asDiagonal();
        res.power = transmit_power(res.w, d);
        res.dual_powers.assign(q.data(), q.data() + q.size());
        return res;
    }

    BeamformingSolution individual_solve(const SystemConfig &config, const ChannelSet &channels, std::uint64_t seed)
    {
        config.validate();
        channels.validate();
        if (channels.num_antennas() != config.m || channels.num_elements() != config.f() ||
            channels.num_users() != config.k)
            throw InvalidArgument("channel dimensions do not match the configuration");

        MaxMinOptions mm;
        mm.seed = seed;
        BeamformingSolution sol;
        sol.ris = ris_max_min(channels, mm);

        const ZfReference zf = zf_reference(channels, sol.ris, config.gamma, channels.noise_powers);
        const ArrayGeometry bs = bs_geometry(config);
        const Codebook cb = build_codebook(config.codebook_oversampling, bs.cols, bs.rows, bs);
        sol.v_blocks = omp_analog(zf.f_opt, cb, config.n, config.d()).v_blocks;

        const CMat rows = cascaded_channel(channels, sol.ris) * assemble_analog(sol.v_blocks);
        sol.w = digital_power_min(rows, config.gamma, channels.noise_powers, config.d()).w;
        return sol;
    }
} // namespace risbf

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

#include "risbf/manifold_opt.hpp"

#include <cmath>

namespace risbf
{
    namespace
    {
        constexpr double manifold_tol = 1e-8;

        double real_inner(const CVec &a, const CVec &b) { return a.dot(b).real(); }

        double tangent_residual(const CVec &u, const CVec &z)
        {
            double r = 0.0;
            for (Eigen::Index i = 0; i < u.size(); ++i)
                r = std::max(r, std::abs((z(i) * std::conj(u(i))).real()));
            return r;
        }

        // Transport onto the tangent space at u (the projection itself).
        CVec transport(const CVec &u, const CVec &z)
        {
            CVec out(z.size());
            for (Eigen::Index i = 0; i < z.size(); ++i)
                out(i) = z(i) - (z(i) * std::conj(u(i))).real() * u(i);
            return out;
        }
    } // namespace

    QuadraticUnitModulusObjective::QuadraticUnitModulusObjective(std::size_t dimension)
        : coeffs_(static_cast<Eigen::Index>(dimension), 0), targets_(0)
    {
        if (dimension == 0)
            throw InvalidArgument("manifold dimension must be positive");
    }

    QuadraticUnitModulusObjective::QuadraticUnitModulusObjective(CMat coefficients, CVec targets)
        : coeffs_(std::move(coefficients)), targets_(std::move(targets))
    {
        if (coeffs_.rows() == 0)
            throw InvalidArgument("manifold dimension must be positive");
        if (coeffs_.cols() != targets_.size())
            throw InvalidArgument("one target per coefficient vector required");
    }

    void QuadraticUnitModulusObjective::add_term(const CVec &c, cplx t)
    {
        if (c.size() != coeffs_.rows())
            throw InvalidArgument("coefficient length must equal the manifold dimension");
        coeffs_.conservativeResize(Eigen::NoChange, coeffs_.cols() + 1);
        coeffs_.col(coeffs_.cols() - 1) = c;
        targets_.conservativeResize(targets_.size() + 1);
        targets_(targets_.size() - 1) = t;
    }

    double QuadraticUnitModulusObjective::value(const CVec &u) const
    {
        if (u.size() != coeffs_.rows())
            throw InvalidArgument("point dimension mismatch");
        if (coeffs_.cols() == 0)
            return 0.0;
        // |u^H c - t| = |c^H u - conj(t)|
        return (coeffs_.adjoint() * u - targets_.conjugate()).squaredNorm();
    }

    CVec QuadraticUnitModulusObjective::euclidean_gradient(const CVec &u) const
    {
        if (u.size() != coeffs_.rows())
            throw InvalidArgument("point dimension mismatch");
        if (coeffs_.cols() == 0)
            return CVec::Zero(u.size());
        return 2.0 * coeffs_ * (coeffs_.adjoint() * u - targets_.conjugate());
    }

    void RcgOptions::validate() const
    {
        if (max_iters == 0 || max_backtracks == 0)
            throw InvalidArgument("RCG iteration limits must be positive");
        if (!(grad_tol > 0.0) || !(initial_step > 0.0))
            throw InvalidArgument("RCG tolerances and step must be positive");
        if (!(armijo_c > 0.0 && armijo_c < 1.0) || !(armijo_shrink > 0.0 && armijo_shrink < 1.0))
            throw InvalidArgument("Armijo constants must lie in (0, 1)");
    }

    CVec tangent_project(const CVec &u, const CVec &z)
    {
        if (u.size() != z.size())
            throw InvalidArgument("tangent projection dimension mismatch");
        if (max_modulus_deviation(u) > manifold_tol)
            throw InvalidArgument("base point is not unit modulus");
        return transport(u, z);
    }

    CVec retract(const CVec &u, const CVec &step)
    {
        return unit_modulus(u + step);
    }

    ConjugateDirection conjugate_direction(const CVec &u, const CVec &grad, const CVec &prev_grad,
                                           const CVec &prev_direction)
    {
        ConjugateDirection out;
        const double prev_sq = prev_grad.squaredNorm();
        if (prev_sq <= 0.0)
        {
            out.direction = -grad;
            return out;
        }
        const CVec moved_grad = transport(u, prev_grad);
        const double beta = std::max(0.0, real_inner(grad, grad - moved_grad) / prev_sq);
        out.direction = -grad + beta * transport(u, prev_direction);
        if (real_inner(grad, out.direction) >= 0.0)
        {
            out.direction = -grad;
            out.reset = true;
        }
        return out;
    }

    RcgResult rcg_minimize(const UnitModulusObjective &objective, const CVec &b0, const RcgOptions &options)
    {
        options.validate();
        if (static_cast<std::size_t>(b0.size()) != objective.dimension())
            throw InvalidArgument("start point dimension mismatch");
        if (max_modulus_deviation(b0) > manifold_tol)
            throw InvalidArgument("start point is not unit modulus");

        const std::size_t restart = options.restart_period == 0 ? objective.dimension() : options.restart_period;

        RcgResult res;
        CVec u = unit_modulus(b0);
        double f = objective.value(u);
        if (!std::isfinite(f))
            throw NumericalError("objective is not finite at the start point");
        CVec grad = transport(u, objective.euclidean_gradient(u));
        double gn = grad.norm();
        CVec dir = -grad;
        bool steepest = true;

        auto record = [&]() {
            if (!options.record_trace)
                return;
            res.trace.objective.push_back(f);
            res.trace.grad_norm.push_back(gn);
            res.trace.tangent_residual.push_back(tangent_residual(u, grad));
            res.trace.modulus_deviation.push_back(max_modulus_deviation(u));
        };
        record();

        std::size_t it = 0;
        for (; it < options.max_iters; ++it)
        {
            if (!std::isfinite(gn))
                throw NumericalError("gradient is not finite");
            if (gn < options.grad_tol)
            {
                res.converged = true;
                break;
            }

            double slope = real_inner(grad, dir);
            double alpha = options.initial_step / gn;
            bool accepted = false;
            CVec cand;
            double fc = f;
            for (int attempt = 0; attempt < 2 && !accepted; ++attempt)
            {
                for (std::size_t bt = 0; bt < options.max_backtracks; ++bt)
                {
                    cand = retract(u, alpha * dir);
                    fc = objective.value(cand);
                    if (!std::isfinite(fc))
                        throw NumericalError("objective is not finite during line search");
                    if (fc <= f + options.armijo_c * alpha * slope)
                    {
                        accepted = true;
                        break;
                    }
                    alpha *= options.armijo_shrink;
                }
                if (!accepted && !steepest)
                {
                    // Retry once along the steepest-descent direction.
                    dir = -grad;
                    slope = -gn * gn;
                    alpha = options.initial_step / gn;
                    steepest = true;
                    ++res.trace.direction_resets;
                }
                else
                    break;
            }
            if (!accepted)
                break; // no Armijo step within the backtracking budget: stationary to working precision

            const CVec prev_grad = grad;
            const CVec prev_dir = dir;
            u = std::move(cand);
            f = fc;
            grad = transport(u, objective.euclidean_gradient(u));
            gn = grad.norm();
            record();

            if ((it + 1) % restart == 0)
            {
                dir = -grad;
                steepest = true;
                ++res.trace.periodic_restarts;
            }
            else
            {
                ConjugateDirection cd = conjugate_direction(u, grad, prev_grad, prev_dir);
                dir = std::move(cd.direction);
                steepest = cd.reset;
                if (cd.reset)
                    ++res.trace.direction_resets;
            }
        }
        if (!res.converged && gn < options.grad_tol)
            res.converged = true;

        res.point = std::move(u);
        res.objective = f;
        res.grad_norm = gn;
        res.iterations = it;
        return res;
    }
} // namespace risbf

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

#ifndef RISBF_MANIFOLD_OPT_HPP
#define RISBF_MANIFOLD_OPT_HPP

#include <cstddef>
#include <vector>

#include "risbf/common.hpp"

namespace risbf
{
    // Smooth real-valued function on the complex circle manifold
    // {u in C^L : |u_l| = 1}. Gradients use the real-coordinate convention
    // df = Re(grad^H du).
    class UnitModulusObjective
    {
    public:
        virtual ~UnitModulusObjective() = default;
        virtual std::size_t dimension() const = 0;
        virtual double value(const CVec &u) const = 0;
        virtual CVec euclidean_gradient(const CVec &u) const = 0;
    };

    // f(u) = sum_i |u^H c_i - t_i|^2.
    class QuadraticUnitModulusObjective final : public UnitModulusObjective
    {
    public:
        explicit QuadraticUnitModulusObjective(std::size_t dimension);
        QuadraticUnitModulusObjective(CMat coefficients, CVec targets);

        void add_term(const CVec &c, cplx t);
        std::size_t num_terms() const { return static_cast<std::size_t>(coeffs_.cols()); }
        const CMat &coefficients() const { return coeffs_; }
        const CVec &targets() const { return targets_; }

        std::size_t dimension() const override { return static_cast<std::size_t>(coeffs_.rows()); }
        double value(const CVec &u) const override;
        // 2 sum_i c_i (c_i^H u - conj(t_i))
        CVec euclidean_gradient(const CVec &u) const override;

    private:
        CMat coeffs_;  // L x terms
        CVec targets_; // terms
    };

    struct RcgOptions
    {
        std::size_t max_iters = 200;
        double grad_tol = 1e-8;
        double armijo_c = 1e-4;
        double armijo_shrink = 0.5;
        double initial_step = 1.0;       // first trial step is initial_step / ||grad||
        std::size_t restart_period = 0;  // 0 restarts every L iterations
        std::size_t max_backtracks = 60;
        bool record_trace = false;

        void validate() const;
    };

    struct RcgTrace
    {
        std::vector<double> objective;          // f at every iterate, starting with b0
        std::vector<double> grad_norm;
        std::vector<double> tangent_residual;   // max |Re(grad .* conj(u))|
        std::vector<double> modulus_deviation;  // max ||u_l| - 1|
        std::size_t direction_resets = 0;       // non-descent conjugate directions replaced by -grad
        std::size_t periodic_restarts = 0;
    };

    struct RcgResult
    {
        CVec point;
        double objective = 0.0;
        double grad_norm = 0.0;
        std::size_t iterations = 0;
        bool converged = false; // gradient tolerance reached
        RcgTrace trace;
    };

    // z - Re(z .* conj(u)) .* u. Throws InvalidArgument if u is off the manifold.
    CVec tangent_project(const CVec &u, const CVec &z);

    CVec retract(const CVec &u, const CVec &step);

    struct ConjugateDirection
    {
        CVec direction;
        bool reset = false; // fell back to steepest descent
    };

    // Polak-Ribiere+ update with vector transport onto the tangent space at u.
    // prev_direction and prev_grad live in the tangent space of the previous
    // iterate and are transported here. Falls back to -grad when the combined
    // direction is not a descent direction.
    ConjugateDirection conjugate_direction(const CVec &u, const CVec &grad,
                                           const CVec &prev_grad, const CVec &prev_direction);

    // Riemannian conjugate gradient with Armijo backtracking and
    // normalization retraction. The returned point never has a larger
    // objective than b0. Throws NumericalError on non-finite objective values.
    RcgResult rcg_minimize(const UnitModulusObjective &objective, const CVec &b0, const RcgOptions &options = {});
} // namespace risbf

#endif

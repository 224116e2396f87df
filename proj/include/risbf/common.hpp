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

#ifndef RISBF_COMMON_HPP
#define RISBF_COMMON_HPP

#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace risbf
{
    using cplx = std::complex<double>;
    using CVec = Eigen::VectorXcd;
    using CMat = Eigen::MatrixXcd;
    using RVec = Eigen::VectorXd;

    inline constexpr double pi = std::numbers::pi;

    // Error hierarchy. The C API maps each class onto a status code.
    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    class InvalidArgument : public Error
    {
    public:
        using Error::Error;
    };

    class IoError : public Error
    {
    public:
        using Error::Error;
    };

    // Raised when a power-minimization instance admits no feasible point
    // (or the channel draw is degenerate for the requested operation).
    class Infeasible : public Error
    {
    public:
        using Error::Error;
    };

    class NumericalError : public Error
    {
    public:
        using Error::Error;
    };

    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
    inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
    inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

    // Entry-wise projection onto the unit circle. Zero entries map to 1.
    inline CVec unit_modulus(const CVec &z)
    {
        CVec out(z.size());
        for (Eigen::Index i = 0; i < z.size(); ++i)
        {
            const double mag = std::abs(z(i));
            out(i) = mag > 0.0 ? z(i) / mag : cplx(1.0, 0.0);
        }
        return out;
    }

    inline double max_modulus_deviation(const CVec &z)
    {
        double dev = 0.0;
        for (Eigen::Index i = 0; i < z.size(); ++i)
            dev = std::max(dev, std::abs(std::abs(z(i)) - 1.0));
        return dev;
    }
} // namespace risbf

#endif

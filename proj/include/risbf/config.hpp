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

#ifndef RISBF_CONFIG_HPP
#define RISBF_CONFIG_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "risbf/common.hpp"

namespace risbf
{
    // Log-distance path loss with log-normal shadowing, all in dB.
    struct PathLossModel
    {
        double intercept_db = 72.0;
        double slope = 2.92;
        double shadowing_std_db = 8.7;

        void validate() const;
    };

    // System dimensions, QoS targets and solver parameters.
    //
    // gamma and sigma2 are stored in linear units (SINR ratio, watts). The dB
    // conversions happen only in the config-file reader and the CLI.
    struct SystemConfig
    {
        std::size_t m = 16;       // BS antennas
        std::size_t n = 4;        // RF chains
        std::size_t k = 3;        // users
        std::size_t f1 = 4;       // RIS rows
        std::size_t f2 = 4;       // RIS columns
        std::size_t bs_rows = 0;  // BS UPA rows; 0 picks the most square factorization of m
        std::size_t bs_cols = 0;

        std::vector<double> gamma;  // per-user SINR targets (linear)
        std::vector<double> sigma2; // per-user noise power (watts)

        double ris_distance = 50.0; // RIS at (ris_distance, ris_offset)
        double ris_offset = 10.0;
        double user_center_x = 100.0;
        double user_radius = 5.0;
        double spacing_over_wavelength = 0.5;

        std::size_t num_clusters = 2;
        std::size_t rays_per_cluster = 5;
        double angular_spread_deg = 5.0;
        PathLossModel path_loss{};

        // Penalty method (rho is expressed in the solver's normalized units).
        double rho0 = 1e-3;
        double c = 0.9;
        double eps1 = 1e-4;
        double eps2 = 1e-7;
        std::size_t max_outer = 500;
        std::size_t max_inner = 50;

        std::size_t codebook_oversampling = 2;

        std::uint64_t seed = 1;

        std::size_t d() const { return n == 0 ? 0 : m / n; }
        std::size_t f() const { return f1 * f2; }
        std::size_t bs_array_rows() const;
        std::size_t bs_array_cols() const;

        // Sets every user's target / noise from a dB / dBm value.
        void set_gamma_db(double db);
        void set_noise_dbm(double dbm);

        // Throws InvalidArgument describing the first violated invariant.
        void validate() const;

        // Reduced scenario: M=16, N=4, K=3, F=16, gamma=10 dB, noise=-85 dBm.
        static SystemConfig desk_scale();
        // Full scenario: 6x6 BS UPA with 6 RF chains, 6x6 RIS, K=3.
        static SystemConfig paper_scale();
    };

    // Flat "key = value" text with '#' comments. Unknown keys are rejected.
    // Recognized keys: m, n, k, f1, f2, gamma_db, noise_dbm, ris_distance,
    // rho0, c, eps1, eps2, seed, plus max_outer, max_inner, bs_rows, bs_cols,
    // clusters, rays, codebook_mu.
    SystemConfig parse_config(const std::string &text, SystemConfig base = SystemConfig::desk_scale());
    SystemConfig load_config(const std::string &path);
    void apply_config_key(SystemConfig &cfg, const std::string &key, const std::string &value);
} // namespace risbf

#endif

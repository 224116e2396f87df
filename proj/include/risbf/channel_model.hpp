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

#ifndef RISBF_CHANNEL_MODEL_HPP
#define RISBF_CHANNEL_MODEL_HPP

#include <optional>
#include <random>
#include <vector>

#include "risbf/common.hpp"
#include "risbf/config.hpp"

namespace risbf
{
    using Rng = std::mt19937_64;

    // Uniform planar array with rows x cols elements.
    struct ArrayGeometry
    {
        std::size_t rows = 1;
        std::size_t cols = 1;
        double spacing_over_wavelength = 0.5;

        std::size_t size() const { return rows * cols; }
        void validate() const;
    };

    struct ClusterSpec
    {
        std::size_t num_clusters = 2;
        std::size_t rays_per_cluster = 5;
        double angular_spread_deg = 5.0; // std-dev of the Laplacian ray offset
        double ray_gain_variance = 1.0;  // E|alpha|^2
        bool unit_ray_gains = false;     // alpha = 1 for every ray (testing)

        void validate() const;
    };

    // One channel realization. h[k] is stored unconjugated: user k's row
    // channel is h[k].adjoint().
    struct ChannelSet
    {
        CMat g;               // F x M, BS -> RIS
        std::vector<CVec> h;  // K vectors of length F, RIS -> user
        std::vector<double> noise_powers;

        std::size_t num_users() const { return h.size(); }
        std::size_t num_elements() const { return static_cast<std::size_t>(g.rows()); }
        std::size_t num_antennas() const { return static_cast<std::size_t>(g.cols()); }
        void validate() const;
    };

    // UPA response. Entry o * cols + p (row-major over (o, p)) equals
    // exp(j 2 pi s (o sin(phi) sin(delta) + p cos(delta))) / sqrt(rows * cols).
    CVec upa_response(double phi, double delta, const ArrayGeometry &geom);

    // Saleh-Valenzuela clustered channel
    //   gain_scale * sum_{cluster, ray} alpha * a_rx(angles) * a_tx(angles)^H.
    // Without tx_geom the transmit side is a single antenna and the result is
    // an rx_geom.size() x 1 matrix. Cluster centers are uniform (azimuth on
    // [0, 2pi), elevation on [0, pi)); rays add a Laplacian offset.
    CMat sample_cluster_channel(const std::optional<ArrayGeometry> &tx_geom,
                                const ArrayGeometry &rx_geom,
                                const ClusterSpec &spec,
                                double gain_scale,
                                Rng &rng);

    double path_loss_db(double distance_m, const PathLossModel &model, double shadowing_db);

    // Draws one realization of the BS / RIS / user layout: BS at the origin,
    // RIS at (ris_distance, ris_offset), users uniform in a disc around
    // (user_center_x, 0). Pure function of (config, seed).
    ChannelSet generate_scenario(const SystemConfig &config, std::uint64_t seed);

    ArrayGeometry bs_geometry(const SystemConfig &config);
    ArrayGeometry ris_geometry(const SystemConfig &config);
} // namespace risbf

#endif

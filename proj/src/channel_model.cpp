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

#include "risbf/channel_model.hpp"

#include <cmath>

namespace risbf
{
    namespace
    {
        // Zero-mean Laplacian with the given standard deviation.
        double laplacian(Rng &rng, double std_dev)
        {
            if (std_dev <= 0.0)
                return 0.0;
            std::uniform_real_distribution<double> uni(-0.5, 0.5);
            const double u = uni(rng);
            const double scale = std_dev / std::sqrt(2.0);
            return -scale * (u < 0.0 ? -1.0 : 1.0) * std::log1p(-2.0 * std::abs(u));
        }

        cplx complex_gaussian(Rng &rng, double variance)
        {
            std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
            const double re = normal(rng);
            const double im = normal(rng);
            return {re, im};
        }

        struct Angles
        {
            double azimuth = 0.0;
            double elevation = 0.0;
        };

        Angles draw_center(Rng &rng)
        {
            std::uniform_real_distribution<double> az(0.0, 2.0 * pi);
            std::uniform_real_distribution<double> el(0.0, pi);
            Angles a;
            a.azimuth = az(rng);
            a.elevation = el(rng);
            return a;
        }

        Angles perturb(const Angles &center, double spread_rad, Rng &rng)
        {
            Angles a;
            a.azimuth = center.azimuth + laplacian(rng, spread_rad);
            a.elevation = center.elevation + laplacian(rng, spread_rad);
            return a;
        }
    } // namespace

    void ArrayGeometry::validate() const
    {
        if (rows == 0 || cols == 0)
            throw InvalidArgument("array geometry needs positive rows and cols");
        if (!(spacing_over_wavelength > 0.0))
            throw InvalidArgument("array spacing must be positive");
    }

    void ClusterSpec::validate() const
    {
        if (num_clusters == 0 || rays_per_cluster == 0)
            throw InvalidArgument("cluster spec needs at least one cluster and one ray");
        if (!(angular_spread_deg >= 0.0) || !(ray_gain_variance >= 0.0))
            throw InvalidArgument("angular spread and ray gain variance must be non-negative");
    }

    void ChannelSet::validate() const
    {
        const auto f = g.rows();
        if (f == 0 || g.cols() == 0 || h.empty())
            throw InvalidArgument("empty channel set");
        if (noise_powers.size() != h.size())
            throw InvalidArgument("one noise power per user required");
        if (!g.allFinite())
            throw InvalidArgument("BS-RIS channel has non-finite entries");
        for (const auto &hk : h)
        {
            if (hk.size() != f)
                throw InvalidArgument("RIS-user channel length differs from RIS size");
            if (!hk.allFinite())
                throw InvalidArgument("RIS-user channel has non-finite entries");
        }
        for (double s : noise_powers)
            if (!(s > 0.0))
                throw InvalidArgument("noise powers must be positive");
    }

    CVec upa_response(double phi, double delta, const ArrayGeometry &geom)
    {
        geom.validate();
        const double k = 2.0 * pi * geom.spacing_over_wavelength;
        const double u = std::sin(phi) * std::sin(delta);
        const double v = std::cos(delta);
        const double norm = 1.0 / std::sqrt(static_cast<double>(geom.size()));
        CVec a(static_cast<Eigen::Index>(geom.size()));
        for (std::size_t o = 0; o < geom.rows; ++o)
            for (std::size_t p = 0; p < geom.cols; ++p)
            {
                const double phase = k * (static_cast<double>(o) * u + static_cast<double>(p) * v);
                a(static_cast<Eigen::Index>(o * geom.cols + p)) = norm * std::polar(1.0, phase);
            }
        return a;
    }

    CMat sample_cluster_channel(const std::optional<ArrayGeometry> &tx_geom, const ArrayGeometry &rx_geom,
                                const ClusterSpec &spec, double gain_scale, Rng &rng)
    {
        spec.validate();
        rx_geom.validate();
        if (tx_geom)
            tx_geom->validate();
        if (!(gain_scale > 0.0))
            throw InvalidArgument("gain scale must be positive");

        const auto rx_n = static_cast<Eigen::Index>(rx_geom.size());
        const auto tx_n = static_cast<Eigen::Index>(tx_geom ? tx_geom->size() : 1);
        const double spread = spec.angular_spread_deg * pi / 180.0;

        CMat out = CMat::Zero(rx_n, tx_n);
        for (std::size_t cl = 0; cl < spec.num_clusters; ++cl)
        {
            const Angles rx_center = draw_center(rng);
            const Angles tx_center = tx_geom ? draw_center(rng) : Angles{};
            for (std::size_t ray = 0; ray < spec.rays_per_cluster; ++ray)
            {
                const Angles rx = perturb(rx_center, spread, rng);
                const CVec a_rx = upa_response(rx.azimuth, rx.elevation, rx_geom);
                const cplx alpha = spec.unit_ray_gains ? cplx(1.0, 0.0) : complex_gaussian(rng, spec.ray_gain_variance);
                if (tx_geom)
                {
                    const Angles tx = perturb(tx_center, spread, rng);
                    const CVec a_tx = upa_response(tx.azimuth, tx.elevation, *tx_geom);
                    out.noalias() += (gain_scale * alpha) * a_rx * a_tx.adjoint();
                }
                else
                {
                    out.col(0) += (gain_scale * alpha) * a_rx;
                }
            }
        }
        return out;
    }

    double path_loss_db(double distance_m, const PathLossModel &model, double shadowing_db)
    {
        if (!(distance_m > 0.0))
            throw InvalidArgument("path loss distance must be positive");
        model.validate();
        return model.intercept_db + 10.0 * model.slope * std::log10(distance_m) + shadowing_db;
    }

    ArrayGeometry bs_geometry(const SystemConfig &config)
    {
        return {config.bs_array_rows(), config.bs_array_cols(), config.spacing_over_wavelength};
    }

    ArrayGeometry ris_geometry(const SystemConfig &config)
    {
        return {config.f1, config.f2, config.spacing_over_wavelength};
    }

    ChannelSet generate_scenario(const SystemConfig &config, std::uint64_t seed)
    {
        config.validate();
        Rng rng(seed);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        std::normal_distribution<double> normal(0.0, 1.0);
        auto shadow = [&](Rng &r) { return config.path_loss.shadowing_std_db * normal(r); };

        const double ris_x = config.ris_distance;
        const double ris_y = config.ris_offset;

        // Users uniform in the disc.
        std::vector<double> user_dist(config.k);
        for (std::size_t u = 0; u < config.k; ++u)
        {
            const double r = config.user_radius * std::sqrt(uni(rng));
            const double ang = 2.0 * pi * uni(rng);
            const double ux = config.user_center_x + r * std::cos(ang);
            const double uy = r * std::sin(ang);
            user_dist[u] = std::hypot(ux - ris_x, uy - ris_y);
        }
        const double bs_ris_dist = std::hypot(ris_x, ris_y);

        // Shadowing drawn once per link.
        const double shadow_g = shadow(rng);
        std::vector<double> shadow_h(config.k);
        for (auto &s : shadow_h)
            s = shadow(rng);

        const ArrayGeometry bs = bs_geometry(config);
        const ArrayGeometry ris = ris_geometry(config);
        const double rays = static_cast<double>(config.num_clusters * config.rays_per_cluster);
        const double m = static_cast<double>(config.m);
        const double f = static_cast<double>(config.f());

        ClusterSpec spec;
        spec.num_clusters = config.num_clusters;
        spec.rays_per_cluster = config.rays_per_cluster;
        spec.angular_spread_deg = config.angular_spread_deg;

        ChannelSet out;
        spec.ray_gain_variance = std::pow(10.0, -0.1 * path_loss_db(bs_ris_dist, config.path_loss, shadow_g));
        out.g = sample_cluster_channel(bs, ris, spec, std::sqrt(m * f / rays), rng);

        // h_k^H = s * sum beta a_R^H, so h_k = s * sum conj(beta) a_R; conj(beta)
        // has the same circular Gaussian law, so the column is drawn directly.
        out.h.reserve(config.k);
        for (std::size_t u = 0; u < config.k; ++u)
        {
            spec.ray_gain_variance = std::pow(10.0, -0.1 * path_loss_db(user_dist[u], config.path_loss, shadow_h[u]));
            out.h.push_back(sample_cluster_channel(std::nullopt, ris, spec, std::sqrt(f / rays), rng).col(0));
        }
        out.noise_powers = config.sigma2;
        return out;
    }
} // namespace risbf

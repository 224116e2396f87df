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

#include "risbf/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace risbf
{
    namespace
    {
        std::string trim(const std::string &s)
        {
            const auto first = s.find_first_not_of(" \t\r");
            if (first == std::string::npos)
                return {};
            const auto last = s.find_last_not_of(" \t\r");
            return s.substr(first, last - first + 1);
        }

        double to_double(const std::string &key, const std::string &value)
        {
            double out = 0.0;
            const auto *end = value.data() + value.size();
            auto [ptr, ec] = std::from_chars(value.data(), end, out);
            if (ec != std::errc() || ptr != end || !std::isfinite(out))
                throw InvalidArgument("config key '" + key + "': not a number: '" + value + "'");
            return out;
        }

        std::uint64_t to_uint(const std::string &key, const std::string &value)
        {
            std::uint64_t out = 0;
            const auto *end = value.data() + value.size();
            auto [ptr, ec] = std::from_chars(value.data(), end, out);
            if (ec != std::errc() || ptr != end)
                throw InvalidArgument("config key '" + key + "': not a non-negative integer: '" + value + "'");
            return out;
        }

        std::size_t square_rows(std::size_t m)
        {
            std::size_t rows = 1;
            for (std::size_t r = 1; r * r <= m; ++r)
                if (m % r == 0)
                    rows = r;
            return rows;
        }
    } // namespace

    void PathLossModel::validate() const
    {
        if (!(slope > 0.0))
            throw InvalidArgument("path loss slope must be positive");
        if (!(shadowing_std_db >= 0.0))
            throw InvalidArgument("shadowing standard deviation must be non-negative");
    }

    std::size_t SystemConfig::bs_array_rows() const
    {
        if (bs_rows != 0)
            return bs_rows;
        if (bs_cols != 0 && m % bs_cols == 0)
            return m / bs_cols;
        return square_rows(m);
    }

    std::size_t SystemConfig::bs_array_cols() const
    {
        const std::size_t rows = bs_array_rows();
        return rows == 0 ? 0 : m / rows;
    }

    void SystemConfig::set_gamma_db(double db) { gamma.assign(k, db_to_linear(db)); }
    void SystemConfig::set_noise_dbm(double dbm) { sigma2.assign(k, dbm_to_watts(dbm)); }

    void SystemConfig::validate() const
    {
        if (m == 0 || n == 0 || k == 0 || f1 == 0 || f2 == 0)
            throw InvalidArgument("m, n, k, f1 and f2 must be positive");
        if (m % n != 0)
            throw InvalidArgument("m must be a multiple of n (M = N * D)");
        if (k > n)
            throw InvalidArgument("k must not exceed n");
        if (bs_array_rows() * bs_array_cols() != m)
            throw InvalidArgument("BS array rows * cols must equal m");
        if (gamma.size() != k || sigma2.size() != k)
            throw InvalidArgument("gamma and sigma2 need one entry per user");
        for (std::size_t i = 0; i < k; ++i)
        {
            if (!(gamma[i] > 0.0) || !std::isfinite(gamma[i]))
                throw InvalidArgument("SINR targets must be positive");
            if (!(sigma2[i] > 0.0) || !std::isfinite(sigma2[i]))
                throw InvalidArgument("noise powers must be positive");
        }
        if (!(c > 0.0 && c < 1.0))
            throw InvalidArgument("penalty scale c must lie in (0, 1)");
        if (!(rho0 > 0.0) || !(eps1 > 0.0) || !(eps2 > 0.0))
            throw InvalidArgument("rho0, eps1 and eps2 must be positive");
        if (max_outer == 0 || max_inner == 0)
            throw InvalidArgument("iteration caps must be positive");
        if (!(spacing_over_wavelength > 0.0))
            throw InvalidArgument("element spacing must be positive");
        if (num_clusters == 0 || rays_per_cluster == 0)
            throw InvalidArgument("clusters and rays per cluster must be positive");
        if (codebook_oversampling == 0)
            throw InvalidArgument("codebook oversampling must be positive");
        if (!(user_radius >= 0.0) || !std::isfinite(ris_distance))
            throw InvalidArgument("invalid geometry");
        path_loss.validate();
    }

    SystemConfig SystemConfig::desk_scale()
    {
        SystemConfig cfg;
        cfg.set_gamma_db(10.0);
        cfg.set_noise_dbm(-85.0);
        return cfg;
    }

    SystemConfig SystemConfig::paper_scale()
    {
        SystemConfig cfg;
        cfg.m = 36;
        cfg.n = 6;
        cfg.f1 = 6;
        cfg.f2 = 6;
        cfg.set_gamma_db(10.0);
        cfg.set_noise_dbm(-85.0);
        return cfg;
    }

    void apply_config_key(SystemConfig &cfg, const std::string &key, const std::string &value)
    {
        if (key == "m")
            cfg.m = to_uint(key, value);
        else if (key == "n")
            cfg.n = to_uint(key, value);
        else if (key == "k")
        {
            // Per-user vectors follow k; keep the first user's values.
            const double g = cfg.gamma.empty() ? db_to_linear(10.0) : cfg.gamma.front();
            const double s = cfg.sigma2.empty() ? dbm_to_watts(-85.0) : cfg.sigma2.front();
            cfg.k = to_uint(key, value);
            cfg.gamma.assign(cfg.k, g);
            cfg.sigma2.assign(cfg.k, s);
        }
        else if (key == "f1")
            cfg.f1 = to_uint(key, value);
        else if (key == "f2")
            cfg.f2 = to_uint(key, value);
        else if (key == "bs_rows")
            cfg.bs_rows = to_uint(key, value);
        else if (key == "bs_cols")
            cfg.bs_cols = to_uint(key, value);
        else if (key == "gamma_db")
            cfg.set_gamma_db(to_double(key, value));
        else if (key == "noise_dbm")
            cfg.set_noise_dbm(to_double(key, value));
        else if (key == "ris_distance")
            cfg.ris_distance = to_double(key, value);
        else if (key == "rho0")
            cfg.rho0 = to_double(key, value);
        else if (key == "c")
            cfg.c = to_double(key, value);
        else if (key == "eps1")
            cfg.eps1 = to_double(key, value);
        else if (key == "eps2")
            cfg.eps2 = to_double(key, value);
        else if (key == "seed")
            cfg.seed = to_uint(key, value);
        else if (key == "max_outer")
            cfg.max_outer = to_uint(key, value);
        else if (key == "max_inner")
            cfg.max_inner = to_uint(key, value);
        else if (key == "clusters")
            cfg.num_clusters = to_uint(key, value);
        else if (key == "rays")
            cfg.rays_per_cluster = to_uint(key, value);
        else if (key == "codebook_mu")
            cfg.codebook_oversampling = to_uint(key, value);
        else
            throw InvalidArgument("unknown config key '" + key + "'");
    }

    SystemConfig parse_config(const std::string &text, SystemConfig base)
    {
        std::istringstream in(text);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line))
        {
            ++lineno;
            if (const auto hash = line.find('#'); hash != std::string::npos)
                line.erase(hash);
            line = trim(line);
            if (line.empty())
                continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw InvalidArgument("config line " + std::to_string(lineno) + ": expected key = value");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty() || value.empty())
                throw InvalidArgument("config line " + std::to_string(lineno) + ": empty key or value");
            apply_config_key(base, key, value);
        }
        base.validate();
        return base;
    }

    SystemConfig load_config(const std::string &path)
    {
        std::ifstream file(path);
        if (!file)
            throw IoError("cannot open config file '" + path + "'");
        std::ostringstream buf;
        buf << file.rdbuf();
        if (file.bad())
            throw IoError("error reading config file '" + path + "'");
        return parse_config(buf.str());
    }
} // namespace risbf

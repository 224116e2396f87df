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

#include "risbf/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "risbf/channel_model.hpp"
#include "risbf/individual_design.hpp"

namespace risbf
{
    namespace
    {
        std::uint64_t splitmix64(std::uint64_t x)
        {
            x += 0x9e3779b97f4a7c15ULL;
            x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
            x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
            return x ^ (x >> 31);
        }

        std::string format_double(const char *fmt, double v)
        {
            if (std::isnan(v))
                return "nan";
            if (std::isinf(v))
                return v > 0 ? "inf" : "-inf";
            char buf[64];
            std::snprintf(buf, sizeof buf, fmt, v);
            return buf;
        }

        std::vector<std::string_view> split(std::string_view s, char sep)
        {
            std::vector<std::string_view> out;
            std::size_t start = 0;
            while (start <= s.size())
            {
                const auto pos = s.find(sep, start);
                const auto end = pos == std::string_view::npos ? s.size() : pos;
                auto tok = s.substr(start, end - start);
                while (!tok.empty() && tok.front() == ' ')
                    tok.remove_prefix(1);
                while (!tok.empty() && tok.back() == ' ')
                    tok.remove_suffix(1);
                out.push_back(tok);
                if (pos == std::string_view::npos)
                    break;
                start = pos + 1;
            }
            return out;
        }

        bool is_penalty_variant(Variant v) { return v != Variant::individual; }

        void write_file(const std::string &path, const std::string &content)
        {
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            if (!out)
                throw IoError("cannot open '" + path + "' for writing");
            out << content;
            out.flush();
            if (!out)
                throw IoError("error writing '" + path + "'");
        }
    } // namespace

    std::string_view to_string(SweepKind kind)
    {
        switch (kind)
        {
        case SweepKind::sinr: return "sinr";
        case SweepKind::elements: return "elements";
        case SweepKind::distance: return "distance";
        case SweepKind::convergence: return "convergence";
        }
        return "unknown";
    }

    std::string_view to_string(Variant variant)
    {
        switch (variant)
        {
        case Variant::penalty_hybrid: return "penalty_hybrid";
        case Variant::penalty_fully_digital: return "penalty_fully_digital";
        case Variant::random_theta: return "random_theta";
        case Variant::maxmin_theta_joint_wv: return "maxmin_theta_joint_wv";
        case Variant::individual: return "individual";
        }
        return "unknown";
    }

    SweepKind parse_sweep_kind(std::string_view s)
    {
        for (auto k : {SweepKind::sinr, SweepKind::elements, SweepKind::distance, SweepKind::convergence})
            if (s == to_string(k))
                return k;
        throw InvalidArgument("unknown sweep kind '" + std::string(s) + "'");
    }

    Variant parse_variant(std::string_view s)
    {
        for (auto v : {Variant::penalty_hybrid, Variant::penalty_fully_digital, Variant::random_theta,
                       Variant::maxmin_theta_joint_wv, Variant::individual})
            if (s == to_string(v))
                return v;
        throw InvalidArgument("unknown variant '" + std::string(s) + "'");
    }

    std::vector<Variant> parse_variants(std::string_view csv)
    {
        std::vector<Variant> out;
        for (auto tok : split(csv, ','))
        {
            const Variant v = parse_variant(tok);
            if (std::find(out.begin(), out.end(), v) != out.end())
                throw InvalidArgument("variant listed twice: '" + std::string(tok) + "'");
            out.push_back(v);
        }
        return out;
    }

    std::vector<double> parse_values(std::string_view csv)
    {
        std::vector<double> out;
        for (auto tok : split(csv, ','))
        {
            std::string s(tok);
            std::size_t used = 0;
            double v = 0.0;
            try
            {
                v = std::stod(s, &used);
            }
            catch (const std::exception &)
            {
                used = 0;
            }
            if (s.empty() || used != s.size() || !std::isfinite(v))
                throw InvalidArgument("bad sweep value '" + s + "'");
            out.push_back(v);
        }
        return out;
    }

    void SweepSpec::validate() const
    {
        if (realizations == 0)
            throw InvalidArgument("realizations must be at least 1");
        if (values.empty())
            throw InvalidArgument("sweep values must not be empty");
        if (!std::is_sorted(values.begin(), values.end()))
            throw InvalidArgument("sweep values must be sorted");
        if (variants.empty())
            throw InvalidArgument("at least one variant is required");
    }

    std::uint64_t channel_seed(std::uint64_t sweep_seed, std::size_t realization)
    {
        return splitmix64(splitmix64(sweep_seed) ^ (0x1000ULL + realization));
    }

    std::uint64_t solver_seed(std::uint64_t sweep_seed, std::size_t realization)
    {
        return splitmix64(splitmix64(sweep_seed ^ 0x5bd1e995ULL) ^ (0x2000ULL + realization));
    }

    SystemConfig config_for_point(const SystemConfig &base, SweepKind kind, double value)
    {
        SystemConfig cfg = base;
        switch (kind)
        {
        case SweepKind::sinr:
        case SweepKind::convergence:
            cfg.set_gamma_db(value);
            break;
        case SweepKind::elements:
        {
            const double rounded = std::round(value);
            if (rounded != value || rounded <= 0.0)
                throw InvalidArgument("element counts must be positive integers");
            const auto f = static_cast<std::size_t>(rounded);
            if (f % cfg.f1 != 0)
                throw InvalidArgument("element count " + std::to_string(f) + " is not a multiple of f1 = " +
                                      std::to_string(cfg.f1));
            cfg.f2 = f / cfg.f1;
            break;
        }
        case SweepKind::distance:
            cfg.ris_distance = value;
            break;
        }
        cfg.validate();
        return cfg;
    }

    VariantOutcome solve_variant(const SystemConfig &config, const ChannelSet &channels, Variant variant,
                                 std::uint64_t seed)
    {
        VariantOutcome out;
        SystemConfig cfg = config;
        if (variant == Variant::individual)
        {
            out.solution = individual_solve(cfg, channels, seed);
            out.converged = true;
        }
        else
        {
            PenaltyOptions opts;
            if (variant == Variant::penalty_fully_digital)
            {
                // One RF chain per antenna; the unit-modulus analog stage is
                // absorbed by the digital precoder.
                cfg.n = cfg.m;
                opts.update_analog = false;
            }
            else if (variant == Variant::random_theta)
            {
                Rng rng(splitmix64(seed ^ 0x7468657461ULL));
                std::uniform_real_distribution<double> uni(0.0, 2.0 * pi);
                CVec ris(static_cast<Eigen::Index>(cfg.f()));
                for (Eigen::Index i = 0; i < ris.size(); ++i)
                    ris(i) = std::polar(1.0, uni(rng));
                opts.initial_ris = ris;
                opts.update_theta = false;
            }
            else if (variant == Variant::maxmin_theta_joint_wv)
            {
                MaxMinOptions mm;
                mm.seed = seed;
                opts.initial_ris = ris_max_min(channels, mm);
                opts.update_theta = false;
            }
            PenaltyResult res = penalty_solve(cfg, channels, seed, opts);
            out.converged = res.converged;
            out.outer_iters = res.state.outer_iters;
            out.trace = std::move(res.diagnostics.trace);
            out.solution = std::move(res.solution);
        }
        out.power_w = transmit_power(out.solution.w, out.solution.chain_size());
        const auto s = all_sinr(out.solution, channels);
        out.min_sinr_db = linear_to_db(*std::min_element(s.begin(), s.end()));
        return out;
    }

    VariantOutcome run_variant(const SystemConfig &config, const ChannelSet &channels, Variant variant,
                               std::uint64_t seed)
    {
        try
        {
            return solve_variant(config, channels, variant, seed);
        }
        catch (const Infeasible &)
        {
        }
        catch (const NumericalError &)
        {
        }
        VariantOutcome out;
        out.power_w = std::numeric_limits<double>::quiet_NaN();
        out.min_sinr_db = std::numeric_limits<double>::quiet_NaN();
        return out;
    }

    SweepOutput run_sweep(const SweepSpec &spec, const SystemConfig &base)
    {
        spec.validate();
        base.validate();

        // Resolve every sweep point up front so configuration errors surface
        // before any work starts.
        std::vector<SystemConfig> configs;
        configs.reserve(spec.values.size());
        for (double v : spec.values)
            configs.push_back(config_for_point(base, spec.kind, v));

        const std::size_t nv = spec.variants.size();
        const std::size_t total = spec.values.size() * spec.realizations * nv;
        SweepOutput out;
        out.rows.resize(total);
        std::vector<std::vector<TraceRecord>> traces(total);

        std::atomic<std::size_t> next{0};
        std::mutex error_mutex;
        std::exception_ptr error;

        auto worker = [&]() {
            for (;;)
            {
                const std::size_t idx = next.fetch_add(1);
                if (idx >= total)
                    return;
                const std::size_t point = idx / (spec.realizations * nv);
                const std::size_t real = (idx / nv) % spec.realizations;
                const Variant variant = spec.variants[idx % nv];
                try
                {
                    const auto t0 = std::chrono::steady_clock::now();
                    const ChannelSet ch = generate_scenario(configs[point], channel_seed(spec.seed, real));
                    VariantOutcome o = run_variant(configs[point], ch, variant, solver_seed(spec.seed, real));
                    const auto t1 = std::chrono::steady_clock::now();

                    ResultRow &row = out.rows[idx];
                    row.variant = variant;
                    row.sweep_value = spec.values[point];
                    row.realization = real;
                    row.power_dbm = std::isfinite(o.power_w) && o.power_w > 0.0 ? watts_to_dbm(o.power_w)
                                                                                 : std::numeric_limits<double>::quiet_NaN();
                    row.converged = o.converged;
                    row.min_sinr_db = o.min_sinr_db;
                    row.outer_iters = o.outer_iters;
                    row.wall_ms = spec.record_timing ? std::chrono::duration<double, std::milli>(t1 - t0).count() : 0.0;
                    traces[idx] = std::move(o.trace);
                }
                catch (...)
                {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                    next.store(total);
                    return;
                }
            }
        };

        std::size_t threads = spec.threads != 0 ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
        threads = std::min(threads, total);
        if (threads <= 1)
            worker();
        else
        {
            std::vector<std::thread> pool;
            pool.reserve(threads);
            for (std::size_t i = 0; i < threads; ++i)
                pool.emplace_back(worker);
            for (auto &t : pool)
                t.join();
        }
        if (error)
            std::rethrow_exception(error);

        for (std::size_t i = 0; i < nv; ++i)
            if (is_penalty_variant(spec.variants[i]))
            {
                out.trace = std::move(traces[i]);
                break;
            }
        return out;
    }

    std::string format_csv(const std::vector<ResultRow> &rows)
    {
        std::string s(csv_header);
        s += '\n';
        for (const auto &r : rows)
        {
            s += to_string(r.variant);
            s += ',' + format_double("%.6g", r.sweep_value);
            s += ',' + std::to_string(r.realization);
            s += ',' + format_double("%.6f", r.power_dbm);
            s += r.converged ? ",1" : ",0";
            s += ',' + format_double("%.6f", r.min_sinr_db);
            s += ',' + std::to_string(r.outer_iters);
            s += ',' + format_double("%.3f", r.wall_ms);
            s += '\n';
        }
        return s;
    }

    std::string format_trace(const std::vector<TraceRecord> &trace)
    {
        std::string s(trace_header);
        s += '\n';
        for (const auto &t : trace)
        {
            s += std::to_string(t.outer_iter);
            s += ',' + format_double("%.9e", t.rho);
            s += ',' + format_double("%.9e", t.objective);
            s += ',' + format_double("%.9e", t.xi);
            s += '\n';
        }
        return s;
    }

    void emit_csv(const std::vector<ResultRow> &rows, const std::string &path) { write_file(path, format_csv(rows)); }

    void emit_trace(const std::vector<TraceRecord> &trace, const std::string &path)
    {
        write_file(path, format_trace(trace));
    }
} // namespace risbf

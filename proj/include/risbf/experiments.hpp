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

#ifndef RISBF_EXPERIMENTS_HPP
#define RISBF_EXPERIMENTS_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "risbf/config.hpp"
#include "risbf/penalty_bcd.hpp"
#include "risbf/system_model.hpp"

namespace risbf
{
    enum class SweepKind
    {
        sinr,        // values are SINR targets in dB
        elements,    // values are RIS element counts (multiples of f1)
        distance,    // values are RIS horizontal distances in meters
        convergence, // like sinr, and the first penalty run's trace is kept
    };

    enum class Variant
    {
        penalty_hybrid,
        penalty_fully_digital,
        random_theta,
        maxmin_theta_joint_wv,
        individual,
    };

    std::string_view to_string(SweepKind kind);
    std::string_view to_string(Variant variant);
    SweepKind parse_sweep_kind(std::string_view s);
    Variant parse_variant(std::string_view s);
    std::vector<Variant> parse_variants(std::string_view csv);
    std::vector<double> parse_values(std::string_view csv);

    struct SweepSpec
    {
        SweepKind kind = SweepKind::sinr;
        std::vector<double> values;
        std::size_t realizations = 1;
        std::vector<Variant> variants{Variant::penalty_hybrid};
        std::uint64_t seed = 1;
        std::size_t threads = 0;    // 0 uses hardware concurrency
        bool record_timing = false; // wall_ms is 0 unless set, keeping output reproducible

        void validate() const;
    };

    struct ResultRow
    {
        Variant variant = Variant::penalty_hybrid;
        double sweep_value = 0.0;
        std::size_t realization = 0;
        double power_dbm = 0.0;
        bool converged = false;
        double min_sinr_db = 0.0;
        std::size_t outer_iters = 0;
        double wall_ms = 0.0;
    };

    struct SweepOutput
    {
        std::vector<ResultRow> rows;       // ordered by (sweep index, realization, variant)
        std::vector<TraceRecord> trace;    // first penalty-based run (sweep 0, realization 0)
    };

    // Channel seed of a realization; shared by every sweep point and variant
    // so comparisons are paired.
    std::uint64_t channel_seed(std::uint64_t sweep_seed, std::size_t realization);
    std::uint64_t solver_seed(std::uint64_t sweep_seed, std::size_t realization);

    SystemConfig config_for_point(const SystemConfig &base, SweepKind kind, double value);

    struct VariantOutcome
    {
        BeamformingSolution solution;
        bool converged = false;
        std::size_t outer_iters = 0;
        double power_w = 0.0;
        double min_sinr_db = 0.0;
        std::vector<TraceRecord> trace;
    };

    // Runs one solver variant on one channel realization; errors propagate.
    VariantOutcome solve_variant(const SystemConfig &config, const ChannelSet &channels, Variant variant,
                                 std::uint64_t seed);

    // As solve_variant, but infeasible or
    // numerically failed runs come back with converged = false and NaN power.
    VariantOutcome run_variant(const SystemConfig &config, const ChannelSet &channels, Variant variant,
                               std::uint64_t seed);

    SweepOutput run_sweep(const SweepSpec &spec, const SystemConfig &base);

    inline constexpr std::string_view csv_header =
        "variant,sweep_value,realization,power_dbm,converged,min_sinr_db,outer_iters,wall_ms";
    inline constexpr std::string_view trace_header = "outer_iter,rho,objective,xi";

    std::string format_csv(const std::vector<ResultRow> &rows);
    std::string format_trace(const std::vector<TraceRecord> &trace);
    // Throw IoError naming the path on failure.
    void emit_csv(const std::vector<ResultRow> &rows, const std::string &path);
    void emit_trace(const std::vector<TraceRecord> &trace, const std::string &path);
} // namespace risbf

#endif

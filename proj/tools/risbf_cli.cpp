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

// Monte Carlo sweep driver. Talks to the library only through the C API.
//
// Exit codes: 0 on completion, 1 on invalid configuration or arguments,
// 2 on I/O errors.

#include <cstdint>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "risbf/risbf.h"

namespace
{
    struct ConfigDeleter
    {
        void operator()(risbf_config *c) const { risbf_config_free(c); }
    };
    struct SweepDeleter
    {
        void operator()(risbf_sweep *s) const { risbf_sweep_free(s); }
    };

    int exit_code(risbf_status st) { return st == RISBF_ERR_IO ? 2 : 1; }

    int report(risbf_status st, const std::string &context)
    {
        std::cerr << "risbf: " << context << ": " << risbf_status_string(st) << ": " << risbf_last_error() << "\n";
        return exit_code(st);
    }

    std::string default_values(const std::string &kind)
    {
        if (kind == "elements")
            return "12,24,36,48,60";
        if (kind == "distance")
            return "10,20,30,40,50,60,70,80,90";
        if (kind == "convergence")
            return "10";
        return "0,5,10,15,20";
    }

    bool parse_values(const std::string &csv, std::vector<double> &out)
    {
        std::stringstream ss(csv);
        std::string tok;
        while (std::getline(ss, tok, ','))
        {
            try
            {
                std::size_t used = 0;
                out.push_back(std::stod(tok, &used));
                if (used != tok.size())
                    return false;
            }
            catch (const std::exception &)
            {
                return false;
            }
        }
        return !out.empty();
    }
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Transmit-power sweeps for RIS-aided hybrid beamforming"};
    std::string config_path;
    std::string kind = "sinr";
    std::string values_csv;
    std::size_t realizations = 20;
    std::string variants = "penalty_hybrid";
    std::optional<std::uint64_t> seed;
    std::string out_path = "results.csv";
    std::string trace_path;
    std::size_t threads = 0;
    bool timing = false;

    app.add_option("--config", config_path, "key = value configuration file (desk-scale defaults otherwise)");
    app.add_option("--sweep", kind, "sweep kind")
        ->check(CLI::IsMember({"sinr", "elements", "distance", "convergence"}));
    app.add_option("--values", values_csv, "comma-separated sorted sweep points");
    app.add_option("--realizations", realizations, "channel realizations per sweep point")->check(CLI::PositiveNumber);
    app.add_option("--variants", variants,
                   "comma-separated subset of penalty_hybrid, penalty_fully_digital, random_theta, "
                   "maxmin_theta_joint_wv, individual");
    app.add_option("--seed", seed, "sweep seed (defaults to the config's seed)");
    app.add_option("--out", out_path, "result CSV path");
    app.add_option("--trace", trace_path, "convergence trace CSV path (first penalty run)");
    app.add_option("--threads", threads, "worker threads, 0 = all cores");
    app.add_flag("--timing", timing, "record wall-clock time per row (output no longer reproducible)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return 1;
    }

    risbf_config *raw_cfg = nullptr;
    const risbf_status st = config_path.empty() ? risbf_config_new(&raw_cfg) : risbf_config_load(config_path.c_str(), &raw_cfg);
    if (st != RISBF_OK)
        return report(st, "loading configuration");
    std::unique_ptr<risbf_config, ConfigDeleter> cfg(raw_cfg);

    std::vector<double> values;
    if (!parse_values(values_csv.empty() ? default_values(kind) : values_csv, values))
    {
        std::cerr << "risbf: invalid --values list '" << values_csv << "'\n";
        return 1;
    }

    std::uint64_t sweep_seed = 0;
    if (seed)
        sweep_seed = *seed;
    else if (risbf_config_get_seed(cfg.get(), &sweep_seed) != RISBF_OK)
        return report(RISBF_ERR_INTERNAL, "reading seed");

    risbf_sweep_spec spec{};
    spec.kind = kind.c_str();
    spec.values = values.data();
    spec.num_values = values.size();
    spec.realizations = realizations;
    spec.variants = variants.c_str();
    spec.seed = sweep_seed;
    spec.threads = threads;
    spec.record_timing = timing ? 1 : 0;

    risbf_sweep *raw_sweep = nullptr;
    if (const risbf_status rs = risbf_sweep_run(cfg.get(), &spec, &raw_sweep); rs != RISBF_OK)
        return report(rs, "running sweep");
    std::unique_ptr<risbf_sweep, SweepDeleter> sweep(raw_sweep);

    if (const risbf_status ws = risbf_sweep_write_csv(sweep.get(), out_path.c_str()); ws != RISBF_OK)
        return report(ws, "writing results");
    if (!trace_path.empty())
        if (const risbf_status ts = risbf_sweep_write_trace(sweep.get(), trace_path.c_str()); ts != RISBF_OK)
            return report(ts, "writing trace");

    std::size_t unconverged = 0;
    const std::size_t rows = risbf_sweep_row_count(sweep.get());
    for (std::size_t i = 0; i < rows; ++i)
    {
        risbf_result_row row{};
        if (risbf_sweep_row(sweep.get(), i, &row) == RISBF_OK && !row.converged)
            ++unconverged;
    }
    std::cerr << "risbf: wrote " << rows << " rows to " << out_path;
    if (unconverged != 0)
        std::cerr << " (" << unconverged << " not converged)";
    std::cerr << "\n";
    return 0;
}

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

#include "risbf/risbf.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "risbf/channel_model.hpp"
#include "risbf/config.hpp"
#include "risbf/experiments.hpp"

struct risbf_config
{
    risbf::SystemConfig cfg;
};

struct risbf_channels
{
    risbf::ChannelSet ch;
};

struct risbf_solution
{
    risbf::VariantOutcome outcome;
    std::vector<double> sinr_db;
};

struct risbf_sweep
{
    risbf::SweepOutput out;
};

namespace
{
    thread_local std::string last_error;

    risbf_status fail(risbf_status status, const std::string &msg)
    {
        last_error = msg;
        return status;
    }

    // Runs fn, translating exceptions into status codes.
    template <typename Fn>
    risbf_status guarded(Fn &&fn)
    {
        try
        {
            fn();
            return RISBF_OK;
        }
        catch (const risbf::InvalidArgument &e)
        {
            return fail(RISBF_ERR_INVALID_ARGUMENT, e.what());
        }
        catch (const risbf::IoError &e)
        {
            return fail(RISBF_ERR_IO, e.what());
        }
        catch (const risbf::Infeasible &e)
        {
            return fail(RISBF_ERR_INFEASIBLE, e.what());
        }
        catch (const risbf::NumericalError &e)
        {
            return fail(RISBF_ERR_NUMERICAL, e.what());
        }
        catch (const std::bad_alloc &)
        {
            return fail(RISBF_ERR_INTERNAL, "out of memory");
        }
        catch (const std::exception &e)
        {
            return fail(RISBF_ERR_INTERNAL, e.what());
        }
        catch (...)
        {
            return fail(RISBF_ERR_INTERNAL, "unknown error");
        }
    }

    risbf_status null_arg(const char *what)
    {
        return fail(RISBF_ERR_INVALID_ARGUMENT, std::string("null argument: ") + what);
    }

    risbf::Variant to_variant(risbf_variant v)
    {
        switch (v)
        {
        case RISBF_VARIANT_PENALTY_HYBRID: return risbf::Variant::penalty_hybrid;
        case RISBF_VARIANT_PENALTY_FULLY_DIGITAL: return risbf::Variant::penalty_fully_digital;
        case RISBF_VARIANT_RANDOM_THETA: return risbf::Variant::random_theta;
        case RISBF_VARIANT_MAXMIN_THETA_JOINT_WV: return risbf::Variant::maxmin_theta_joint_wv;
        case RISBF_VARIANT_INDIVIDUAL: return risbf::Variant::individual;
        }
        throw risbf::InvalidArgument("unknown variant id " + std::to_string(static_cast<int>(v)));
    }
} // namespace

extern "C" {

const char *risbf_version(void) { return "0.1.0"; }

const char *risbf_last_error(void) { return last_error.c_str(); }

const char *risbf_status_string(risbf_status status)
{
    switch (status)
    {
    case RISBF_OK: return "ok";
    case RISBF_ERR_INVALID_ARGUMENT: return "invalid argument";
    case RISBF_ERR_IO: return "i/o error";
    case RISBF_ERR_INFEASIBLE: return "infeasible";
    case RISBF_ERR_NUMERICAL: return "numerical failure";
    case RISBF_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

risbf_status risbf_config_new(risbf_config **out)
{
    if (!out)
        return null_arg("out");
    *out = nullptr;
    return guarded([&] { *out = new risbf_config{risbf::SystemConfig::desk_scale()}; });
}

risbf_status risbf_config_load(const char *path, risbf_config **out)
{
    if (!path)
        return null_arg("path");
    if (!out)
        return null_arg("out");
    *out = nullptr;
    return guarded([&] { *out = new risbf_config{risbf::load_config(path)}; });
}

risbf_status risbf_config_set(risbf_config *cfg, const char *key, const char *value)
{
    if (!cfg || !key || !value)
        return null_arg("cfg/key/value");
    return guarded([&] { risbf::apply_config_key(cfg->cfg, key, value); });
}

risbf_status risbf_config_validate(const risbf_config *cfg)
{
    if (!cfg)
        return null_arg("cfg");
    return guarded([&] { cfg->cfg.validate(); });
}

risbf_status risbf_config_get_seed(const risbf_config *cfg, uint64_t *seed)
{
    if (!cfg || !seed)
        return null_arg("cfg/seed");
    *seed = cfg->cfg.seed;
    return RISBF_OK;
}

void risbf_config_free(risbf_config *cfg) { delete cfg; }

risbf_status risbf_channels_generate(const risbf_config *cfg, uint64_t seed, risbf_channels **out)
{
    if (!cfg)
        return null_arg("cfg");
    if (!out)
        return null_arg("out");
    *out = nullptr;
    return guarded([&] { *out = new risbf_channels{risbf::generate_scenario(cfg->cfg, seed)}; });
}

risbf_status risbf_channels_dims(const risbf_channels *ch, size_t *elements, size_t *antennas, size_t *users)
{
    if (!ch)
        return null_arg("ch");
    if (elements)
        *elements = ch->ch.num_elements();
    if (antennas)
        *antennas = ch->ch.num_antennas();
    if (users)
        *users = ch->ch.num_users();
    return RISBF_OK;
}

void risbf_channels_free(risbf_channels *ch) { delete ch; }

risbf_status risbf_solve(const risbf_config *cfg, const risbf_channels *ch, risbf_variant variant, uint64_t seed,
                         risbf_solution **out)
{
    if (!cfg || !ch)
        return null_arg("cfg/ch");
    if (!out)
        return null_arg("out");
    *out = nullptr;
    return guarded([&] {
        auto sol = std::make_unique<risbf_solution>();
        sol->outcome = risbf::solve_variant(cfg->cfg, ch->ch, to_variant(variant), seed);
        for (double s : risbf::all_sinr(sol->outcome.solution, ch->ch))
            sol->sinr_db.push_back(risbf::linear_to_db(s));
        *out = sol.release();
    });
}

risbf_status risbf_solution_summary_get(const risbf_solution *sol, risbf_solution_summary *out)
{
    if (!sol || !out)
        return null_arg("sol/out");
    const auto &o = sol->outcome;
    out->power_dbm = o.power_w > 0.0 ? risbf::watts_to_dbm(o.power_w) : -INFINITY;
    out->min_sinr_db = o.min_sinr_db;
    out->converged = o.converged ? 1 : 0;
    out->outer_iters = o.outer_iters;
    return RISBF_OK;
}

risbf_status risbf_solution_sinr_db(const risbf_solution *sol, double *sinr_db, size_t users)
{
    if (!sol || !sinr_db)
        return null_arg("sol/sinr_db");
    if (users != sol->sinr_db.size())
        return fail(RISBF_ERR_INVALID_ARGUMENT, "user count mismatch: solution has " +
                                                    std::to_string(sol->sinr_db.size()) + " users");
    std::copy(sol->sinr_db.begin(), sol->sinr_db.end(), sinr_db);
    return RISBF_OK;
}

risbf_status risbf_solution_write_trace(const risbf_solution *sol, const char *path)
{
    if (!sol || !path)
        return null_arg("sol/path");
    return guarded([&] { risbf::emit_trace(sol->outcome.trace, path); });
}

void risbf_solution_free(risbf_solution *sol) { delete sol; }

risbf_status risbf_sweep_run(const risbf_config *cfg, const risbf_sweep_spec *spec, risbf_sweep **out)
{
    if (!cfg || !spec)
        return null_arg("cfg/spec");
    if (!out)
        return null_arg("out");
    if (!spec->kind || !spec->variants || (spec->num_values > 0 && !spec->values))
        return null_arg("spec fields");
    *out = nullptr;
    return guarded([&] {
        risbf::SweepSpec s;
        s.kind = risbf::parse_sweep_kind(spec->kind);
        s.values.assign(spec->values, spec->values + spec->num_values);
        s.realizations = spec->realizations;
        s.variants = risbf::parse_variants(spec->variants);
        s.seed = spec->seed;
        s.threads = spec->threads;
        s.record_timing = spec->record_timing != 0;
        *out = new risbf_sweep{risbf::run_sweep(s, cfg->cfg)};
    });
}

size_t risbf_sweep_row_count(const risbf_sweep *sweep) { return sweep ? sweep->out.rows.size() : 0; }

risbf_status risbf_sweep_row(const risbf_sweep *sweep, size_t index, risbf_result_row *out)
{
    if (!sweep || !out)
        return null_arg("sweep/out");
    if (index >= sweep->out.rows.size())
        return fail(RISBF_ERR_INVALID_ARGUMENT, "row index out of range");
    const auto &r = sweep->out.rows[index];
    out->variant = risbf::to_string(r.variant).data();
    out->sweep_value = r.sweep_value;
    out->realization = r.realization;
    out->power_dbm = r.power_dbm;
    out->converged = r.converged ? 1 : 0;
    out->min_sinr_db = r.min_sinr_db;
    out->outer_iters = r.outer_iters;
    out->wall_ms = r.wall_ms;
    return RISBF_OK;
}

risbf_status risbf_sweep_write_csv(const risbf_sweep *sweep, const char *path)
{
    if (!sweep || !path)
        return null_arg("sweep/path");
    return guarded([&] { risbf::emit_csv(sweep->out.rows, path); });
}

risbf_status risbf_sweep_write_trace(const risbf_sweep *sweep, const char *path)
{
    if (!sweep || !path)
        return null_arg("sweep/path");
    return guarded([&] { risbf::emit_trace(sweep->out.trace, path); });
}

void risbf_sweep_free(risbf_sweep *sweep) { delete sweep; }

} // extern "C"

#include "psaes/psaes.h"

#include "psaes/experiments.hpp"
#include "psaes/selftest.hpp"

#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

struct psaes_config
{
    psaes::RunConfig cfg;
};

struct psaes_optimizer
{
    std::unique_ptr<psaes::Optimizer> opt;
};

namespace
{
    thread_local std::string g_last_error;

    psaes_status fail(psaes_status s, const std::string &msg)
    {
        g_last_error = msg;
        return s;
    }

    // Maps exceptions from the core onto status codes.
    template <class F>
    psaes_status guarded(F &&f)
    {
        try
        {
            g_last_error.clear();
            return f();
        }
        catch (const psaes::InvalidArgument &e)
        {
            return fail(PSAES_ERR_INVALID_ARGUMENT, e.what());
        }
        catch (const psaes::StateCorruption &e)
        {
            return fail(PSAES_ERR_STATE, e.what());
        }
        catch (const psaes::ObjectiveFailure &e)
        {
            return fail(PSAES_ERR_OBJECTIVE, e.what());
        }
        catch (const psaes::IoFailure &e)
        {
            return fail(PSAES_ERR_IO, e.what());
        }
        catch (const std::exception &e)
        {
            return fail(PSAES_ERR_INTERNAL, e.what());
        }
        catch (...)
        {
            return fail(PSAES_ERR_INTERNAL, "unknown exception");
        }
    }

    std::vector<std::uint64_t> batch_seeds(const psaes_batch *b)
    {
        if (!b->seeds || b->n_seeds == 0)
            return psaes::default_seeds(20);
        return {b->seeds, b->seeds + b->n_seeds};
    }

    void announce(const psaes_batch *b, const std::vector<std::filesystem::path> &paths)
    {
        if (!b->on_path)
            return;
        for (const auto &p : paths)
            b->on_path(p.string().c_str(), b->user);
    }

    std::filesystem::path out_dir(const psaes_batch *b)
    {
        return (b->out_dir && *b->out_dir) ? b->out_dir : ".";
    }

    // First failed run in a batch, reported with its config.
    psaes_status check_batch(const std::vector<psaes::RunRecord> &runs)
    {
        for (const auto &r : runs)
            if (!r.summary.error.empty())
                return fail(PSAES_ERR_RUN_FAILED,
                            "run " + r.summary.run_id + " failed: " + r.summary.error + "\n" + r.config.to_text());
        return PSAES_OK;
    }
}

extern "C" {

const char *psaes_last_error(void)
{
    return g_last_error.c_str();
}

const char *psaes_version(void)
{
    return "0.3.0";
}

const char *psaes_status_name(psaes_status s)
{
    switch (s)
    {
    case PSAES_OK: return "ok";
    case PSAES_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PSAES_ERR_STATE: return "state corruption";
    case PSAES_ERR_OBJECTIVE: return "objective failure";
    case PSAES_ERR_IO: return "i/o failure";
    case PSAES_ERR_INTERNAL: return "internal error";
    case PSAES_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case PSAES_ERR_RUN_FAILED: return "run failed";
    }
    return "unknown status";
}

psaes_status psaes_config_create(psaes_config **out)
{
    if (!out)
        return fail(PSAES_ERR_INVALID_ARGUMENT, "null output pointer");
    return guarded([&] {
        *out = new psaes_config{};
        return PSAES_OK;
    });
}

void psaes_config_destroy(psaes_config *cfg)
{
    delete cfg;
}

psaes_status psaes_config_set(psaes_config *cfg, const char *key, const char *value)
{
    if (!cfg || !key || !value)
        return fail(PSAES_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        cfg->cfg.set(key, value);
        return PSAES_OK;
    });
}

psaes_status psaes_config_load(psaes_config *cfg, const char *path)
{
    if (!cfg || !path)
        return fail(PSAES_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        std::ifstream in(path);
        if (!in)
            return fail(PSAES_ERR_IO, std::string("cannot read config file ") + path);
        std::stringstream ss;
        ss << in.rdbuf();
        psaes::apply_config_text(cfg->cfg, ss.str());
        return PSAES_OK;
    });
}

psaes_status psaes_config_validate(const psaes_config *cfg)
{
    if (!cfg)
        return fail(PSAES_ERR_INVALID_ARGUMENT, "null config");
    return guarded([&] {
        cfg->cfg.validate();
        return PSAES_OK;
    });
}

psaes_status psaes_config_to_string(const psaes_config *cfg, char *buf, size_t cap, size_t *needed)
{
    if (!cfg)
        return fail(PSAES_ERR_INVALID_ARGUMENT, "null config");
    return guarded([&] {
        const std::string text = cfg->cfg.to_text();
        if (needed)
            *needed = text.size() + 1;
        if (!buf)
            return PSAES_OK;
        if (cap < text.size() + 1)
            return fail(PSAES_ERR_BUFFER_TOO_SMALL, "buffer too small for config text");
        std::memcpy(buf, text.c_str(), text.size() + 1);
        return PSAES_OK;
    });
}

psaes_status psaes_optimizer_create(const psaes_config *cfg, psaes_optimizer **out)
{
    if (!cfg || !out)
        return fail(PSAES_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        auto h = std::make_unique<psaes_optimizer>();
        h->opt = std::make_unique<psaes::Optimizer>(cfg->cfg, psaes::make_objective(cfg->cfg.function, cfg->cfg.dim));
        *out = h.release();
        return PSAES_OK;
    });
}

void psaes_optimizer_destroy(psaes_optimizer *opt)
{
    delete opt;
}

psaes_status psaes_optimizer_step(psaes_optimizer *opt, psaes_trace_row *row)
{
    if (!opt)
        return fail(PSAES_ERR_INVALID_ARGUMENT, "null optimizer");
    return guarded([&] {
        const psaes::TraceRow r = opt->opt->step();
        if (row)
        {
            row->g = r.g;
            row->lambda_real = r.lambda_real;
            row->lambda_r = r.lambda_r;
            row->sigma_pre_correction = r.sigma_pre_correction;
            row->sigma_post_correction = r.sigma_post_correction;
            row->correction_branch = r.correction_branch;
            row->p_sigma_norm = r.p_sigma_norm;
            row->f_best = r.f_best;
            row->f_of_mean = r.f_of_mean;
            row->fevals_cumulative = r.fevals_cumulative;
            row->wall_micros = r.wall_micros;
        }
        return PSAES_OK;
    });
}

int psaes_optimizer_done(const psaes_optimizer *opt)
{
    return opt ? (opt->opt->done() ? 1 : 0) : 1;
}

size_t psaes_optimizer_dimension(const psaes_optimizer *opt)
{
    return opt ? opt->opt->state().dimension() : 0;
}

psaes_status psaes_optimizer_mean(const psaes_optimizer *opt, double *out, size_t n)
{
    if (!opt || !out)
        return fail(PSAES_ERR_INVALID_ARGUMENT, "null argument");
    const auto &m = opt->opt->state().mean;
    if (n < static_cast<size_t>(m.size()))
        return fail(PSAES_ERR_BUFFER_TOO_SMALL, "mean buffer shorter than the dimension");
    for (Eigen::Index i = 0; i < m.size(); ++i)
        out[i] = m(i);
    return PSAES_OK;
}

double psaes_optimizer_sigma(const psaes_optimizer *opt)
{
    return opt ? opt->opt->state().sigma : 0.0;
}

psaes_status psaes_run(const psaes_config *cfg, const psaes_batch *batch)
{
    if (!cfg || !batch)
        return fail(PSAES_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        psaes::RunRecord rec;
        try
        {
            rec = psaes::run_single(cfg->cfg);
        }
        catch (const psaes::InvalidArgument &)
        {
            throw;
        }
        catch (const std::exception &e)
        {
            return fail(PSAES_ERR_RUN_FAILED, std::string("run failed: ") + e.what() + "\n" + cfg->cfg.to_text());
        }
        announce(batch, psaes::emit_run(rec, out_dir(batch), batch->force != 0));
        return PSAES_OK;
    });
}

psaes_status psaes_experiment_forced(const psaes_config *cfg, const char *direction, int with_correction,
                                     const psaes_batch *batch)
{
    if (!cfg || !batch || !direction)
        return fail(PSAES_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        psaes::LambdaSchedule dir;
        if (std::strcmp(direction, "increasing") == 0)
            dir = psaes::LambdaSchedule::ForcedIncreasing;
        else if (std::strcmp(direction, "decreasing") == 0)
            dir = psaes::LambdaSchedule::ForcedDecreasing;
        else
            return fail(PSAES_ERR_INVALID_ARGUMENT,
                        std::string("direction must be increasing or decreasing, got ") + direction);

        const auto res = psaes::run_experiment1(dir, with_correction != 0, cfg->cfg, batch_seeds(batch), batch->jobs);
        const std::string name = with_correction ? "experiment1" : "experiment2";
        announce(batch, psaes::emit_experiment1(res, name, out_dir(batch), batch->force != 0));
        return check_batch(res.runs);
    });
}

psaes_status psaes_kappa_sweep(const psaes_config *cfg, const double *kappas, size_t n_kappas,
                               const psaes_batch *batch)
{
    if (!cfg || !batch)
        return fail(PSAES_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        std::vector<double> grid = kappas && n_kappas ? std::vector<double>(kappas, kappas + n_kappas)
                                                      : psaes::default_kappas();
        std::vector<psaes::RunRecord> runs;
        const auto rows = psaes::run_kappa_sweep(cfg->cfg, grid, batch_seeds(batch), batch->jobs, &runs);
        announce(batch, psaes::emit_kappa_sweep(rows, runs, out_dir(batch), batch->force != 0));
        return PSAES_OK; // failed runs are listed in runs.csv
    });
}

psaes_status psaes_compare(const psaes_config *cfg, const psaes_batch *batch)
{
    if (!cfg || !batch)
        return fail(PSAES_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const auto res = psaes::run_comparison(cfg->cfg, batch_seeds(batch), batch->jobs);
        announce(batch, psaes::emit_comparison(res, out_dir(batch), batch->force != 0));
        psaes_status s = check_batch(res.general);
        return s != PSAES_OK ? s : check_batch(res.reformulated);
    });
}

psaes_status psaes_selftest(psaes_line_fn on_line, void *user, size_t *passed, size_t *failed)
{
    return guarded([&] {
        const psaes::SelftestReport rep = psaes::run_selftest();
        if (on_line)
            for (const auto &c : rep.checks)
            {
                const std::string line = std::string(c.passed ? "PASS " : "FAIL ") + c.name + ": " + c.detail;
                on_line(line.c_str(), user);
            }
        if (passed)
            *passed = rep.passed();
        if (failed)
            *failed = rep.failed();
        return PSAES_OK;
    });
}

} // extern "C"

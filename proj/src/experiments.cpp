#include "psaes/experiments.hpp"
#include "psaes/benchmarks.hpp"
#include "psaes/trace.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

namespace psaes
{
    namespace fs = std::filesystem;

    RunRecord run_single(const RunConfig &config)
    {
        RunRecord rec;
        rec.config = config;
        Optimizer opt(config, make_objective(config.function, config.dim));

        const auto t0 = std::chrono::steady_clock::now();
        while (!opt.done())
            rec.trace.push_back(opt.step());
        const auto t1 = std::chrono::steady_clock::now();

        RunSummary &s = rec.summary;
        s.run_id = config.effective_run_id();
        s.seed = config.seed;
        s.algorithm = to_string(config.algorithm);
        s.kappa = config.kappa;
        s.cpu_seconds = std::chrono::duration<double>(t1 - t0).count();
        s.val = std::numeric_limits<double>::infinity();
        for (const auto &r : rec.trace)
            s.val = std::min(s.val, r.f_best);
        s.gap = std::abs(opt.objective().optimum_value - s.val);
        s.generations = rec.trace.size();
        s.f_n = s.generations ? static_cast<double>(opt.fevals()) / static_cast<double>(s.generations) : 0.0;
        s.sigma0 = opt.sigma0();
        s.final_sigma = opt.state().sigma;
        s.guard_trips = opt.guard_trips();
        s.repairs = opt.repairs();
        s.invariant_violations = opt.invariants().total();
        s.budget_hit = opt.budget_hit();
        rec.invariants = opt.invariants();
        return rec;
    }

    std::vector<RunRecord> run_many(const std::vector<RunConfig> &configs, std::size_t jobs)
    {
        std::vector<RunRecord> out(configs.size());
        std::atomic<std::size_t> next{0};

        auto worker = [&] {
            for (std::size_t i = next++; i < configs.size(); i = next++)
            {
                try
                {
                    out[i] = run_single(configs[i]);
                }
                catch (const std::exception &e)
                {
                    out[i].config = configs[i];
                    out[i].summary.run_id = configs[i].effective_run_id();
                    out[i].summary.seed = configs[i].seed;
                    out[i].summary.algorithm = to_string(configs[i].algorithm);
                    out[i].summary.kappa = configs[i].kappa;
                    out[i].summary.error = e.what();
                }
            }
        };

        jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(configs.size(), 1));
        std::vector<std::thread> pool;
        for (std::size_t t = 1; t < jobs; ++t)
            pool.emplace_back(worker);
        worker();
        for (auto &t : pool)
            t.join();
        return out;
    }

    std::vector<std::uint64_t> default_seeds(std::size_t count)
    {
        std::vector<std::uint64_t> s(count);
        for (std::size_t i = 0; i < count; ++i)
            s[i] = i + 1;
        return s;
    }

    double s_f(double mean_cpu, double mean_gap, double mean_fn)
    {
        return mean_cpu + mean_gap + mean_fn;
    }

    double sum_complexity(double mean_cpu, double mean_gap, double mean_fn, double mean_gens)
    {
        return mean_cpu + mean_gap + mean_fn + mean_gens;
    }

    Aggregate aggregate(const std::vector<RunRecord> &records)
    {
        std::vector<const RunRecord *> sorted;
        for (const auto &r : records)
            sorted.push_back(&r);
        std::stable_sort(sorted.begin(), sorted.end(),
                         [](const RunRecord *a, const RunRecord *b) { return a->summary.seed < b->summary.seed; });

        Aggregate a;
        for (const RunRecord *r : sorted)
        {
            ++a.runs;
            if (!r->summary.error.empty())
            {
                ++a.failures;
                continue;
            }
            a.mean_cpu += r->summary.cpu_seconds;
            a.mean_val += r->summary.val;
            a.mean_gap += r->summary.gap;
            a.mean_fn += r->summary.f_n;
            a.mean_gens += static_cast<double>(r->summary.generations);
        }
        const std::size_t ok = a.runs - a.failures;
        if (ok > 0)
        {
            const double k = static_cast<double>(ok);
            a.mean_cpu /= k;
            a.mean_val /= k;
            a.mean_gap /= k;
            a.mean_fn /= k;
            a.mean_gens /= k;
        }
        return a;
    }

    Experiment1Result run_experiment1(LambdaSchedule direction, bool with_correction, const RunConfig &base,
                                      const std::vector<std::uint64_t> &seeds, std::size_t jobs)
    {
        if (direction != LambdaSchedule::ForcedIncreasing && direction != LambdaSchedule::ForcedDecreasing)
            throw InvalidArgument("forced-schedule experiment needs forced-increasing or forced-decreasing");

        Experiment1Result res;
        res.direction = direction;
        res.with_correction = with_correction;

        std::vector<RunConfig> cfgs;
        for (auto seed : seeds)
        {
            RunConfig c = base;
            c.seed = seed;
            c.schedule = direction;
            c.algorithm = with_correction ? Algorithm::PsaGeneral : Algorithm::PsaNoCorrection;
            c.run_id = c.function + "-" + to_string(c.algorithm) + "-" + to_string(direction) + "-s" +
                       std::to_string(seed);
            cfgs.push_back(c);
        }
        res.runs = run_many(cfgs, jobs);
        return res;
    }

    std::vector<double> sigma_series(const RunRecord &r)
    {
        std::vector<double> s;
        s.push_back(r.summary.sigma0);
        for (const auto &row : r.trace)
            s.push_back(row.sigma_post_correction);
        return s;
    }

    std::vector<double> default_kappas()
    {
        std::vector<double> k;
        for (int i = 0; i <= 10; ++i)
            k.push_back(i / 10.0);
        return k;
    }

    std::vector<SweepRow> run_kappa_sweep(const RunConfig &base, const std::vector<double> &kappas,
                                          const std::vector<std::uint64_t> &seeds, std::size_t jobs,
                                          std::vector<RunRecord> *runs_out)
    {
        std::vector<RunConfig> cfgs;
        for (double k : kappas)
        {
            if (!(k >= 0.0 && k <= 1.0))
                throw InvalidArgument("kappa grid values must lie in [0, 1]");
            for (auto seed : seeds)
            {
                RunConfig c = base;
                c.algorithm = Algorithm::PsaScaled;
                c.kappa = k;
                c.seed = seed;
                char buf[16];
                std::snprintf(buf, sizeof buf, "%.2f", k);
                c.run_id = c.function + "-kappa" + buf + "-s" + std::to_string(seed);
                cfgs.push_back(c);
            }
        }
        std::vector<RunRecord> all = run_many(cfgs, jobs);

        std::vector<SweepRow> rows;
        for (std::size_t ki = 0; ki < kappas.size(); ++ki)
        {
            std::vector<RunRecord> slice(all.begin() + static_cast<std::ptrdiff_t>(ki * seeds.size()),
                                         all.begin() + static_cast<std::ptrdiff_t>((ki + 1) * seeds.size()));
            SweepRow row;
            row.function = base.function;
            row.kappa = kappas[ki];
            row.agg = aggregate(slice);
            row.s_f = s_f(row.agg.mean_cpu, row.agg.mean_gap, row.agg.mean_fn);
            row.sum_complexity = sum_complexity(row.agg.mean_cpu, row.agg.mean_gap, row.agg.mean_fn, row.agg.mean_gens);
            rows.push_back(row);
        }
        if (runs_out)
            *runs_out = std::move(all);
        return rows;
    }

    ComparisonResult run_comparison(const RunConfig &base, const std::vector<std::uint64_t> &seeds, std::size_t jobs)
    {
        std::vector<RunConfig> cfgs;
        for (Algorithm a : {Algorithm::PsaGeneral, Algorithm::PsaReformulated})
            for (auto seed : seeds)
            {
                RunConfig c = base;
                c.algorithm = a;
                c.seed = seed;
                c.schedule = LambdaSchedule::Adaptive;
                c.run_id.clear();
                cfgs.push_back(c);
            }
        std::vector<RunRecord> all = run_many(cfgs, jobs);

        ComparisonResult res;
        const auto half = static_cast<std::ptrdiff_t>(seeds.size());
        res.general.assign(all.begin(), all.begin() + half);
        res.reformulated.assign(all.begin() + half, all.end());
        res.general_agg = aggregate(res.general);
        res.reformulated_agg = aggregate(res.reformulated);
        return res;
    }

    // ---- output ----

    std::vector<std::string> summary_columns()
    {
        return {"run_id",      "seed",          "algorithm", "kappa",         "cpu_seconds",
                "val",         "gap",           "f_N",       "generations",   "sigma0",
                "final_sigma", "guard_trips",   "repairs",   "invariant_violations", "budget_hit",
                "error"};
    }

    std::vector<std::string> sweep_columns()
    {
        return {"function",  "kappa",            "mean_cpu_seconds", "mean_gap", "mean_f_N", "mean_generations",
                "s_f",       "sum_complexity",   "runs",             "failures"};
    }

    std::vector<std::string> sigma_series_columns()
    {
        return {"run_id", "seed", "g", "lambda_r", "sigma", "delta_sigma"};
    }

    std::vector<std::string> comparison_columns()
    {
        return {"algorithm", "runs", "failures", "mean_cpu_seconds", "mean_val", "mean_gap", "mean_f_N",
                "mean_generations"};
    }

    namespace
    {
        std::string clean(const std::string &s)
        {
            std::string out = s;
            std::replace(out.begin(), out.end(), ',', ';');
            std::replace(out.begin(), out.end(), '\n', ' ');
            return out;
        }

        void write_summaries(std::ostream &os, const std::vector<RunRecord> &runs)
        {
            os << csv_line(summary_columns()) << '\n';
            for (const auto &r : runs)
            {
                const RunSummary &s = r.summary;
                os << csv_line({s.run_id, std::to_string(s.seed), s.algorithm, format_double(s.kappa),
                                format_double(s.cpu_seconds), format_double(s.val), format_double(s.gap),
                                format_double(s.f_n), std::to_string(s.generations), format_double(s.sigma0),
                                format_double(s.final_sigma), std::to_string(s.guard_trips),
                                std::to_string(s.repairs), std::to_string(s.invariant_violations),
                                s.budget_hit ? "1" : "0", clean(s.error)})
                   << '\n';
            }
        }

        std::string agg_line(const std::string &label, const Aggregate &a)
        {
            return csv_line({label, std::to_string(a.runs), std::to_string(a.failures), format_double(a.mean_cpu),
                             format_double(a.mean_val), format_double(a.mean_gap), format_double(a.mean_fn),
                             format_double(a.mean_gens)});
        }

        std::string fixed(double x, int digits = 4)
        {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.*f", digits, x);
            return buf;
        }
    }

    std::vector<fs::path> emit_run(const RunRecord &r, const fs::path &dir, bool force)
    {
        const fs::path p = dir / (r.summary.run_id + ".csv");
        auto os = open_output(p, force);
        write_trace_csv(os, r.trace, r.config.dim);
        return {p};
    }

    std::vector<fs::path> emit_experiment1(const Experiment1Result &res, const std::string &name, const fs::path &dir,
                                           bool force)
    {
        std::vector<fs::path> paths;
        for (const auto &r : res.runs)
            if (r.summary.error.empty())
            {
                auto more = emit_run(r, dir / "traces", force);
                paths.insert(paths.end(), more.begin(), more.end());
            }

        const fs::path series = dir / "sigma_series.csv";
        {
            auto os = open_output(series, force);
            os << csv_line(sigma_series_columns()) << '\n';
            for (const auto &r : res.runs)
            {
                if (!r.summary.error.empty())
                    continue;
                const auto s = sigma_series(r);
                for (std::size_t g = 0; g < s.size(); ++g)
                {
                    const std::size_t lam = g == 0 ? default_lambda(r.config.dim) : r.trace[g - 1].lambda_r;
                    const double ds = g + 1 < s.size() ? s[g + 1] - s[g] : std::nan("");
                    os << csv_line({r.summary.run_id, std::to_string(r.summary.seed), std::to_string(g),
                                    std::to_string(lam), format_double(s[g]), format_double(ds)})
                       << '\n';
                }
            }
        }
        paths.push_back(series);

        const fs::path summary = dir / "summary.csv";
        {
            auto os = open_output(summary, force);
            write_summaries(os, res.runs);
        }
        paths.push_back(summary);

        const fs::path text = dir / "summary.txt";
        {
            auto os = open_output(text, force);
            os << name << ": " << to_string(res.direction) << " schedule, "
               << (res.with_correction ? "correction on (psa-general)" : "correction off (psa-no-correction)")
               << "\n";
            os << "seed  gens  sigma0      final_sigma  val\n";
            for (const auto &r : res.runs)
            {
                const RunSummary &s = r.summary;
                if (!s.error.empty())
                {
                    os << s.seed << "  failed: " << s.error << "\n";
                    continue;
                }
                os << s.seed << "  " << s.generations << "  " << fixed(s.sigma0) << "  " << format_double(s.final_sigma)
                   << "  " << fixed(s.val) << "\n";
            }
        }
        paths.push_back(text);
        return paths;
    }

    std::vector<fs::path> emit_kappa_sweep(const std::vector<SweepRow> &rows, const std::vector<RunRecord> &runs,
                                           const fs::path &dir, bool force)
    {
        std::vector<fs::path> paths;
        const fs::path sweep = dir / "sweep.csv";
        {
            auto os = open_output(sweep, force);
            os << csv_line(sweep_columns()) << '\n';
            for (const auto &r : rows)
                os << csv_line({r.function, format_double(r.kappa), format_double(r.agg.mean_cpu),
                                format_double(r.agg.mean_gap), format_double(r.agg.mean_fn),
                                format_double(r.agg.mean_gens), format_double(r.s_f),
                                format_double(r.sum_complexity), std::to_string(r.agg.runs),
                                std::to_string(r.agg.failures)})
                   << '\n';
        }
        paths.push_back(sweep);

        const fs::path per_run = dir / "runs.csv";
        {
            auto os = open_output(per_run, force);
            write_summaries(os, runs);
        }
        paths.push_back(per_run);

        const fs::path text = dir / "summary.txt";
        {
            auto os = open_output(text, force);
            std::size_t best = 0;
            for (std::size_t i = 1; i < rows.size(); ++i)
                if (rows[i].s_f < rows[best].s_f)
                    best = i;
            os << "kappa  cpu[s]   |f*-f|    f_N       gens    S_f       sum\n";
            for (const auto &r : rows)
                os << fixed(r.kappa, 1) << "    " << fixed(r.agg.mean_cpu) << "  " << fixed(r.agg.mean_gap) << "  "
                   << fixed(r.agg.mean_fn, 2) << "  " << fixed(r.agg.mean_gens, 2) << "  " << fixed(r.s_f) << "  "
                   << fixed(r.sum_complexity) << "\n";
            if (!rows.empty())
                os << "argmin S_f: kappa = " << fixed(rows[best].kappa, 1) << "\n";
        }
        paths.push_back(text);
        return paths;
    }

    std::vector<fs::path> emit_comparison(const ComparisonResult &res, const fs::path &dir, bool force)
    {
        std::vector<fs::path> paths;
        for (const auto *set : {&res.general, &res.reformulated})
            for (const auto &r : *set)
                if (r.summary.error.empty())
                {
                    auto more = emit_run(r, dir / "traces", force);
                    paths.insert(paths.end(), more.begin(), more.end());
                }

        const fs::path runs = dir / "runs.csv";
        {
            auto os = open_output(runs, force);
            std::vector<RunRecord> both = res.general;
            both.insert(both.end(), res.reformulated.begin(), res.reformulated.end());
            write_summaries(os, both);
        }
        paths.push_back(runs);

        const fs::path avg = dir / "averages.csv";
        {
            auto os = open_output(avg, force);
            os << csv_line(comparison_columns()) << '\n';
            os << agg_line("psa-general", res.general_agg) << '\n';
            os << agg_line("psa-reformulated", res.reformulated_agg) << '\n';
        }
        paths.push_back(avg);

        const fs::path text = dir / "summary.txt";
        {
            auto os = open_output(text, force);
            os << "run  general: cpu[s] val f_N gens | reformulated: cpu[s] val f_N gens\n";
            for (std::size_t i = 0; i < res.general.size() && i < res.reformulated.size(); ++i)
            {
                const RunSummary &a = res.general[i].summary;
                const RunSummary &b = res.reformulated[i].summary;
                os << a.seed << "  " << fixed(a.cpu_seconds) << " " << fixed(a.val) << " " << fixed(a.f_n, 2) << " "
                   << a.generations << " | " << fixed(b.cpu_seconds) << " " << fixed(b.val) << " " << fixed(b.f_n, 2)
                   << " " << b.generations << "\n";
            }
            const Aggregate &g = res.general_agg;
            const Aggregate &r = res.reformulated_agg;
            os << "avg  " << fixed(g.mean_cpu) << " " << fixed(g.mean_val) << " " << fixed(g.mean_fn, 2) << " "
               << fixed(g.mean_gens, 2) << " | " << fixed(r.mean_cpu) << " " << fixed(r.mean_val) << " "
               << fixed(r.mean_fn, 2) << " " << fixed(r.mean_gens, 2) << "\n";
        }
        paths.push_back(text);
        return paths;
    }
}

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "oracles.hpp"

#include "psaes/experiments.hpp"
#include "psaes/sigma_correct.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

using namespace psaes;

namespace
{
    std::size_t jobs()
    {
        return std::max(1u, std::thread::hardware_concurrency());
    }

    std::string fmt(const char *f, double x)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, f, x);
        return buf;
    }

    struct Ledger
    {
        int failed = 0;
        std::vector<RunRecord> all_runs;

        void report(int id, bool ok, const std::string &what, const std::string &detail)
        {
            std::printf("[%s] criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
            std::fflush(stdout);
            if (!ok)
                ++failed;
        }

        void keep(const std::vector<RunRecord> &rs) { all_runs.insert(all_runs.end(), rs.begin(), rs.end()); }
    };

    std::vector<RunConfig> per_seed(RunConfig c, const std::vector<std::uint64_t> &seeds)
    {
        std::vector<RunConfig> out;
        for (std::uint64_t s : seeds)
        {
            c.seed = s;
            out.push_back(c);
        }
        return out;
    }

    std::size_t count_failed(const std::vector<RunRecord> &rs)
    {
        return static_cast<std::size_t>(
            std::count_if(rs.begin(), rs.end(), [](const RunRecord &r) { return !r.summary.error.empty(); }));
    }

    void sphere_sanity(Ledger &L)
    {
        RunConfig c;
        c.function = "sphere";
        c.algorithm = Algorithm::CmaEs;
        c.max_gens = 250;
        c.tol = 1e-8;
        const auto runs = run_many(per_seed(c, default_seeds()), jobs());
        L.keep(runs);
        std::size_t hits = 0;
        for (const auto &r : runs)
            if (r.summary.error.empty() && r.summary.val < 1e-8)
                ++hits;
        L.report(1, hits >= 18, "cma-es reaches f < 1e-8 on 2D sphere within 250 generations",
                 std::to_string(hits) + "/20 seeds");
    }

    void ratio_grid(Ledger &L)
    {
        const StrategyParams p = derive_params(6, 2);
        // with the scale on, sigma 3 keeps S > 0 at the top of the grid
        const RhoInputs base{6, p.weights, p.mu_w, 2, 0.0, 3.0, true};
        std::vector<double> grid;
        for (int k = 0; k < 30; ++k)
            grid.push_back(3.0 - (3.0 - 0.1) * k / 29.0);

        bool s_positive = true;
        for (double mu : grid)
        {
            RhoInputs in = base;
            in.mu_proxy = mu;
            s_positive = s_positive && order_stat_sum(in) > 0.0;
        }
        const auto ratios = rho_ratios(base, grid);
        std::size_t first_bad = 0;
        double worst = 2.0;
        for (std::size_t i = 0; i < ratios.size(); ++i)
        {
            const double r = ratios[i].value_or(0.0);
            if (r < worst)
                worst = r;
            if (r < 1.0 - 1e-12 && first_bad == 0)
                first_bad = i + 1;
        }
        const bool ok = s_positive && rho_ratio_check(base, grid);
        std::string detail = std::string("S > 0 throughout: ") + (s_positive ? "yes" : "no") +
                             "; min ratio " + fmt("%.6f", worst);
        if (first_bad)
            detail += "; first ratio below 1 at step " + std::to_string(first_bad) + " (mu " +
                      fmt("%.3f", grid[first_bad - 1]) + " -> " + fmt("%.3f", grid[first_bad]) + ")";
        L.report(2, ok, "rho ratio >= 1 on the decreasing location grid 3.0 -> 0.1 (30 steps)", detail);
    }

    void blow_up(Ledger &L)
    {
        RunConfig c;
        c.function = "rastrigin";
        c.algorithm = Algorithm::PsaGeneral;
        c.max_gens = 20;
        const auto runs = run_many(per_seed(c, default_seeds()), jobs());
        L.keep(runs);
        std::size_t gens = 0, grew = 0, above = 0;
        for (const auto &r : runs)
        {
            if (!r.summary.error.empty())
                continue;
            for (const auto &row : r.trace)
                if (row.g >= 5 && row.g <= 20)
                {
                    ++gens;
                    if (row.sigma_post_correction >= row.sigma_pre_correction)
                        ++grew;
                }
            if (r.summary.final_sigma > r.summary.sigma0)
                ++above;
        }
        const double frac = gens ? static_cast<double>(grew) / gens : 0.0;
        const bool ok = count_failed(runs) == 0 && frac >= 0.9 && above >= 15;
        L.report(3, ok, "psa-general on 2D Rastrigin: correction grows sigma in >= 90% of generations 5-20, final sigma > sigma0 in >= 15/20",
                 fmt("%.1f%%", 100.0 * frac) + " of " + std::to_string(gens) + " generations; " + std::to_string(above) +
                     "/20 seeds above sigma0");
    }

    void ablation(Ledger &L)
    {
        RunConfig c;
        c.function = "rastrigin";
        c.mc_samples = 128;
        const auto res = run_experiment1(LambdaSchedule::ForcedIncreasing, false, c, default_seeds(), jobs());
        L.keep(res.runs);
        std::size_t mono = 0;
        for (const auto &r : res.runs)
        {
            if (!r.summary.error.empty())
                continue;
            const auto s = sigma_series(r);
            bool ok = true;
            for (std::size_t g = 3; g + 1 < s.size(); ++g)
                ok = ok && s[g + 1] <= s[g];
            if (ok)
                ++mono;
        }
        L.report(4, mono >= 18,
                 "psa-no-correction, forced increasing schedule, 2D Rastrigin: sigma nonincreasing for g >= 3 in >= 18/20",
                 std::to_string(mono) + "/20 seeds");
    }

    void head_to_head(Ledger &L)
    {
        RunConfig r;
        r.function = "rastrigin";
        r.kappa = 0.5;
        r.L = 6.0;
        r.max_gens = 20;
        const ComparisonResult ras = run_comparison(r, default_seeds(), jobs());
        L.keep(ras.general);
        L.keep(ras.reformulated);
        const double gg = ras.general_agg.mean_gap, gr = ras.reformulated_agg.mean_gap;
        const double ratio = gr > 0.0 ? gg / gr : 0.0;
        const bool ok5 = ras.general_agg.failures == 0 && ras.reformulated_agg.failures == 0 && gr < gg && ratio >= 1.5;
        L.report(5, ok5, "2D Rastrigin mean gap: reformulated < general with general/reformulated >= 1.5",
                 "general " + fmt("%.4f", gg) + ", reformulated " + fmt("%.4f", gr) + ", ratio " + fmt("%.3f", ratio));

        RunConfig s = r;
        s.function = "schaffer";
        s.max_gens = 10;
        const ComparisonResult sch = run_comparison(s, default_seeds(), jobs());
        L.keep(sch.general);
        L.keep(sch.reformulated);
        const double sg = sch.general_agg.mean_gap, sr = sch.reformulated_agg.mean_gap;
        const bool ok6 = sch.general_agg.failures == 0 && sch.reformulated_agg.failures == 0 && sr < sg &&
                         sch.general_agg.mean_fn == 6.0 && sch.reformulated_agg.mean_fn == 6.0;
        L.report(6, ok6, "2D Schaffer mean gap: reformulated < general, and mean f_N = 6.00 for both",
                 "gap general " + fmt("%.4f", sg) + ", reformulated " + fmt("%.4f", sr) + "; f_N general " +
                     fmt("%.4f", sch.general_agg.mean_fn) + ", reformulated " + fmt("%.4f", sch.reformulated_agg.mean_fn));

        std::size_t at_floor = 0;
        for (const auto &run : ras.general)
            if (run.summary.error.empty() && run.summary.f_n == 6.0)
                ++at_floor;
        L.report(7, at_floor == 20, "psa-general f_N = 6.00 on 2D Rastrigin for every seed",
                 std::to_string(at_floor) + "/20 seeds");
    }

    void kappa_sweep(Ledger &L)
    {
        bool argmin_ok = true;
        std::string detail;
        bool gap_ok = false;
        for (const char *fn : {"rastrigin", "schaffer"})
        {
            RunConfig c;
            c.function = fn;
            c.max_gens = 15;
            std::vector<RunRecord> runs;
            const auto rows = run_kappa_sweep(c, default_kappas(), default_seeds(), jobs(), &runs);
            L.keep(runs);
            std::size_t best = 0;
            for (std::size_t i = 1; i < rows.size(); ++i)
                if (rows[i].s_f < rows[best].s_f)
                    best = i;
            const double kbest = rows[best].kappa;
            argmin_ok = argmin_ok && kbest > 0.35 && kbest < 0.65 && count_failed(runs) == 0;
            detail += std::string(fn) + " argmin S_f at kappa " + fmt("%.1f", kbest);

            if (std::string(fn) == "rastrigin")
            {
                auto gap_at = [&](double k) {
                    for (const auto &row : rows)
                        if (std::abs(row.kappa - k) < 1e-9)
                            return row.agg.mean_gap;
                    return std::nan("");
                };
                const double g5 = gap_at(0.5);
                gap_ok = g5 < gap_at(0.0) && g5 < gap_at(0.9) && g5 < gap_at(1.0);
                detail += " (gap at 0/0.5/0.9/1: " + fmt("%.3f", gap_at(0.0)) + "/" + fmt("%.3f", g5) + "/" +
                          fmt("%.3f", gap_at(0.9)) + "/" + fmt("%.3f", gap_at(1.0)) + ")";
            }
            detail += "; ";
        }
        detail.resize(detail.size() - 2);
        L.report(8, gap_ok && argmin_ok,
                 "kappa sweep: Rastrigin gap at 0.5 below 0, 0.9 and 1.0; S_f argmin in {0.4, 0.5, 0.6} on both functions",
                 detail);
    }

    void mu_w_fit_check(Ledger &L)
    {
        double worst = 0.0;
        for (std::size_t lambda = 6; lambda <= 100; ++lambda)
            worst = std::max(worst, std::abs(mu_w_fit(lambda) - derive_params(lambda, 2).mu_w));
        const std::string delta = fmt("%.4f", delta_for_L(6.0));
        L.report(9, worst < 0.8 && delta == "1.5852" && std::abs(delta_for_L(6.0) - 1.5852) < 1e-12,
                 "linear mu_w fit within 0.8 for lambda 6..100, delta(L=6) = 1.5852",
                 "max residual " + fmt("%.4f", worst) + ", delta " + delta);
    }

    void order_stats(Ledger &L)
    {
        double worst = 0.0;
        for (std::size_t lambda : {6u, 20u, 100u})
        {
            const auto mc = oracle::mc_order_stats(lambda, 1000000, 4242 + lambda);
            const StrategyParams p = derive_params(lambda, 2);
            const RhoInputs in{lambda, p.weights, p.mu_w, 2, 0.0, 1.0, true};
            for (std::size_t i = 1; i <= lambda; ++i)
                worst = std::max(worst, std::abs(expected_order_stat(i, in) - mc[i - 1]));
        }
        L.report(10, worst < 0.02, "order-statistic approximation within 0.02 of 1e6-draw means, lambda 6/20/100",
                 "max deviation " + fmt("%.5f", worst));
    }

    void invariants(Ledger &L)
    {
        std::size_t violations = 0, gens = 0, failed = 0;
        std::string first;
        for (const auto &r : L.all_runs)
        {
            if (!r.summary.error.empty())
            {
                ++failed;
                if (first.empty())
                    first = r.summary.run_id + ": " + r.summary.error;
                continue;
            }
            violations += r.invariants.total();
            gens += r.invariants.generations_checked;
            if (first.empty() && !r.invariants.messages.empty())
                first = r.summary.run_id + ": " + r.invariants.messages.front();
        }
        std::string detail = std::to_string(violations) + " violations over " + std::to_string(gens) +
                             " generations in " + std::to_string(L.all_runs.size()) + " runs, " +
                             std::to_string(failed) + " failed runs";
        if (!first.empty())
            detail += "; first: " + first;
        L.report(11, violations == 0 && failed == 0 && gens > 0, "structural invariants after every generation",
                 detail);
    }
}

int main()
{
    Ledger L;
    sphere_sanity(L);
    ratio_grid(L);
    blow_up(L);
    ablation(L);
    head_to_head(L);
    kappa_sweep(L);
    mu_w_fit_check(L);
    order_stats(L);
    invariants(L);
    std::printf("acceptance: %d of 11 criteria failed\n", L.failed);
    return L.failed == 0 ? 0 : 1;
}

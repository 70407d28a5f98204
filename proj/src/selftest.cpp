#include "psaes/selftest.hpp"
#include "psaes/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace psaes
{
    std::size_t SelftestReport::passed() const
    {
        return static_cast<std::size_t>(
            std::count_if(checks.begin(), checks.end(), [](const SelftestCheck &c) { return c.passed; }));
    }

    std::size_t SelftestReport::failed() const
    {
        return checks.size() - passed();
    }

    namespace
    {
        std::string num(double x)
        {
            char buf[48];
            std::snprintf(buf, sizeof buf, "%.4g", x);
            return buf;
        }

        SelftestCheck sphere_check()
        {
            std::size_t hits = 0;
            for (std::uint64_t seed = 1; seed <= 20; ++seed)
            {
                RunConfig c;
                c.function = "sphere";
                c.algorithm = Algorithm::CmaEs;
                c.seed = seed;
                c.max_gens = 250;
                c.tol = 1e-8;
                const RunRecord r = run_single(c);
                if (r.summary.val < 1e-8)
                    ++hits;
            }
            return {"cma-es sphere convergence", hits >= 18, std::to_string(hits) + "/20 seeds below 1e-8"};
        }

        SelftestCheck order_stat_check()
        {
            constexpr std::size_t lambda = 6;
            constexpr std::size_t draws = 200000;
            rng::Engine eng(12345);
            std::normal_distribution<double> gauss;
            std::vector<double> sum(lambda, 0.0), sample(lambda);
            for (std::size_t d = 0; d < draws; ++d)
            {
                for (auto &v : sample)
                    v = gauss(eng);
                std::sort(sample.begin(), sample.end());
                for (std::size_t i = 0; i < lambda; ++i)
                    sum[i] += sample[i];
            }
            RhoInputs in;
            in.lambda_r = lambda;
            in.sigma = 1.0;
            double worst = 0.0;
            for (std::size_t i = 1; i <= lambda; ++i)
                worst = std::max(worst, std::abs(expected_order_stat(i, in) - sum[i - 1] / draws));
            return {"order statistics (lambda 6)", worst < 0.02, "max deviation " + num(worst)};
        }

        SelftestCheck rho_ratio_check()
        {
            const StrategyParams p = derive_params(6, 2);
            RhoInputs in{6, p.weights, p.mu_w, 2, 0.0, 1.0, false};
            // stays where S^2 mu_w <= n - 1, the region in which rho grows with S
            std::vector<double> grid;
            for (int k = 0; k <= 20; ++k)
                grid.push_back(0.9 - 0.55 * k / 20.0);
            const bool ok = rho_ratio_check(in, grid);
            return {"rho ratio >= 1 for decreasing location", ok, "mu in [0.35, 0.9], sigma scale off"};
        }

        SelftestCheck invariant_check()
        {
            std::size_t violations = 0, gens = 0;
            for (Algorithm a : {Algorithm::PsaGeneral, Algorithm::PsaReformulated})
                for (std::uint64_t seed = 1; seed <= 3; ++seed)
                {
                    RunConfig c;
                    c.function = "rastrigin";
                    c.algorithm = a;
                    c.seed = seed;
                    c.mc_samples = 32;
                    const RunRecord r = run_single(c);
                    violations += r.invariants.total();
                    gens += r.invariants.generations_checked;
                }
            return {"structural invariants", violations == 0,
                    std::to_string(violations) + " violations over " + std::to_string(gens) + " generations"};
        }
    }

    SelftestReport run_selftest()
    {
        SelftestReport rep;
        for (auto check : {sphere_check, order_stat_check, rho_ratio_check, invariant_check})
        {
            try
            {
                rep.checks.push_back(check());
            }
            catch (const std::exception &e)
            {
                rep.checks.push_back({"check threw", false, e.what()});
            }
        }
        return rep;
    }
}

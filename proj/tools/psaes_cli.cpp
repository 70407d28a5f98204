// psaes command-line front end. Talks to the library through the C API only.

#include "psaes/psaes.h"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace
{
    constexpr int kExitOk = 0;
    constexpr int kExitRuntime = 1;
    constexpr int kExitUsage = 2;

    // Flags forwarded verbatim to psaes_config_set.
    const std::vector<std::pair<std::string, std::string>> kRunFlags = {
        {"function", "rastrigin | schaffer | sphere"},
        {"dim", "search-space dimension"},
        {"seed", "run seed (first seed for batch commands)"},
        {"algorithm", "cma-es | psa-general | psa-reformulated | psa-no-correction | psa-scaled"},
        {"kappa", "correction scale in (0, 1]"},
        {"L", "population-size change threshold"},
        {"max-gens", "generation cap"},
        {"tol", "stop when best f is within tol of the optimum"},
        {"schedule", "adaptive | forced-increasing | forced-decreasing | frozen"},
        {"mc-samples", "Monte Carlo samples for the path normalization"},
        {"mu-proxy", "mean-of-m | f-of-m"},
        {"sigma-scale", "scale order statistics by sigma (true/false)"},
        {"fisher", "shape | distribution"},
        {"clamp", "clamp the mean to the domain box (true/false)"},
        {"time-budget", "seconds per run, 0 disables"},
        {"run-id", "run identifier used in CSV rows and file names"},
    };

    struct Common
    {
        std::map<std::string, std::string> values;
        std::map<std::string, std::vector<CLI::Option *>> opts; // one per subcommand

        bool given(const std::string &name) const
        {
            for (const CLI::Option *o : opts.at(name))
                if (o->count() > 0)
                    return true;
            return false;
        }
        std::string out;
        bool force = false;
        bool print_config = false;
        std::size_t jobs = 1;
        std::size_t seeds = 20;
    };

    void add_run_flags(CLI::App *sub, Common &c, bool batch)
    {
        for (const auto &[name, help] : kRunFlags)
            c.opts[name].push_back(sub->add_option("--" + name, c.values[name], help));
        sub->add_option("--config", "key=value file; flags given on the command line take precedence");
        sub->add_option("--out", c.out, "output directory (default: $PSAES_OUT or ./psaes-out)");
        sub->add_flag("--force", c.force, "overwrite existing output files");
        sub->add_flag("--print-config", c.print_config, "print the resolved configuration and exit");
        if (batch)
        {
            sub->add_option("--jobs", c.jobs, "independent runs executed in parallel")->check(CLI::PositiveNumber);
            sub->add_option("--seeds", c.seeds, "number of seeds, starting at --seed")->check(CLI::PositiveNumber);
        }
    }

    std::string trim(const std::string &s)
    {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos)
            return {};
        return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
    }

    // Splices key=value lines from --config into argv as --key=value, right
    // after the subcommand, so later command-line flags win.
    std::vector<std::string> expand_config(int argc, char **argv)
    {
        std::vector<std::string> args(argv, argv + argc);
        for (std::size_t i = 1; i < args.size(); ++i)
        {
            std::string path;
            std::size_t drop = 0;
            if (args[i] == "--config" && i + 1 < args.size())
                path = args[i + 1], drop = 2;
            else if (args[i].rfind("--config=", 0) == 0)
                path = args[i].substr(9), drop = 1;
            else
                continue;

            std::ifstream in(path);
            if (!in)
                throw CLI::ValidationError("--config", "cannot read " + path);
            std::vector<std::string> injected;
            std::string line;
            while (std::getline(in, line))
            {
                if (auto h = line.find('#'); h != std::string::npos)
                    line = line.substr(0, h);
                line = trim(line);
                if (line.empty())
                    continue;
                const auto eq = line.find('=');
                if (eq == std::string::npos)
                    throw CLI::ValidationError("--config", "expected key=value, got '" + line + "'");
                injected.push_back("--" + trim(line.substr(0, eq)) + "=" + trim(line.substr(eq + 1)));
            }
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                       args.begin() + static_cast<std::ptrdiff_t>(i + drop));
            // args[1] is the subcommand
            args.insert(args.begin() + 2, injected.begin(), injected.end());
            break;
        }
        return args;
    }

    struct ConfigHandle
    {
        psaes_config *cfg = nullptr;
        ~ConfigHandle() { psaes_config_destroy(cfg); }
    };

    std::string config_text(const psaes_config *cfg)
    {
        std::size_t need = 0;
        psaes_config_to_string(cfg, nullptr, 0, &need);
        std::string s(need, '\0');
        psaes_config_to_string(cfg, s.data(), s.size(), &need);
        s.resize(need ? need - 1 : 0);
        return s;
    }

    void echo_path(const char *path, void *)
    {
        std::printf("wrote %s\n", path);
    }

    void print_line(const char *line, void *)
    {
        std::printf("%s\n", line);
    }

    std::string output_root(const Common &c)
    {
        if (!c.out.empty())
            return c.out;
        if (const char *env = std::getenv("PSAES_OUT"); env && *env)
            return env;
        return "psaes-out";
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Population-size adaptive CMA-ES with step-size correction variants"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.set_version_flag("--version", std::string(psaes_version()));

    Common common;
    std::string direction = "increasing";
    std::vector<double> kappas;

    CLI::App *run = app.add_subcommand("run", "single optimization run; writes one trace CSV");
    add_run_flags(run, common, false);

    CLI::App *exp1 = app.add_subcommand("experiment1", "forced population-size schedule with correction");
    CLI::App *exp2 = app.add_subcommand("experiment2", "forced population-size schedule without correction");
    for (CLI::App *sub : {exp1, exp2})
    {
        add_run_flags(sub, common, true);
        sub->add_option("--direction", direction, "increasing | decreasing")
            ->check(CLI::IsMember({"increasing", "decreasing"}));
    }

    CLI::App *sweep = app.add_subcommand("kappa-sweep", "sweep the correction scale kappa");
    add_run_flags(sweep, common, true);
    sweep->add_option("--kappas", kappas, "comma-separated grid (default 0,0.1,...,1)")->delimiter(',');

    CLI::App *compare = app.add_subcommand("compare", "paired psa-general vs psa-reformulated runs");
    add_run_flags(compare, common, true);

    CLI::App *selftest = app.add_subcommand("selftest", "run the built-in invariant checks");

    std::vector<std::string> args;
    try
    {
        args = expand_config(argc, argv);
        std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
        app.parse(std::move(rev));
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForVersion &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return kExitUsage;
    }

    if (selftest->parsed())
    {
        std::size_t passed = 0, failed = 0;
        if (psaes_selftest(print_line, nullptr, &passed, &failed) != PSAES_OK)
        {
            std::fprintf(stderr, "selftest: %s\n", psaes_last_error());
            return kExitRuntime;
        }
        std::printf("selftest: %zu passed, %zu failed\n", passed, failed);
        return failed == 0 ? kExitOk : kExitRuntime;
    }

    ConfigHandle h;
    if (psaes_config_create(&h.cfg) != PSAES_OK)
    {
        std::fprintf(stderr, "error: %s\n", psaes_last_error());
        return kExitRuntime;
    }
    if (sweep->parsed() && !common.given("max-gens"))
        psaes_config_set(h.cfg, "max-gens", "15");
    for (const auto &[name, help] : kRunFlags)
    {
        if (!common.given(name))
            continue;
        if (psaes_config_set(h.cfg, name.c_str(), common.values[name].c_str()) != PSAES_OK)
        {
            std::fprintf(stderr, "usage error: %s\n", psaes_last_error());
            return kExitUsage;
        }
    }
    // the sweep chooses its own algorithm and kappa grid
    if (!sweep->parsed() && psaes_config_validate(h.cfg) != PSAES_OK)
    {
        std::fprintf(stderr, "usage error: %s\n", psaes_last_error());
        return kExitUsage;
    }
    for (double k : kappas)
        if (!(k >= 0.0 && k <= 1.0))
        {
            std::fprintf(stderr, "usage error: --kappas values must lie in [0, 1]\n");
            return kExitUsage;
        }

    if (common.print_config)
    {
        std::printf("%s", config_text(h.cfg).c_str());
        return kExitOk;
    }

    std::string function = common.given("function") ? common.values["function"] : "rastrigin";
    std::uint64_t first_seed = 1;
    if (common.given("seed"))
        first_seed = std::stoull(common.values["seed"]);
    std::vector<std::uint64_t> seeds(common.seeds);
    for (std::size_t i = 0; i < seeds.size(); ++i)
        seeds[i] = first_seed + i;

    const std::string root = output_root(common);
    std::string dir = root;
    psaes_batch batch{};
    batch.force = common.force ? 1 : 0;
    batch.jobs = common.jobs;
    batch.seeds = seeds.data();
    batch.n_seeds = seeds.size();
    batch.on_path = echo_path;

    psaes_status st = PSAES_OK;
    if (run->parsed())
    {
        dir = root + "/run";
        batch.out_dir = dir.c_str();
        st = psaes_run(h.cfg, &batch);
    }
    else if (exp1->parsed() || exp2->parsed())
    {
        const bool with = exp1->parsed();
        dir = root + (with ? "/experiment1-" : "/experiment2-") + direction + "/" + function;
        batch.out_dir = dir.c_str();
        st = psaes_experiment_forced(h.cfg, direction.c_str(), with ? 1 : 0, &batch);
    }
    else if (sweep->parsed())
    {
        dir = root + "/kappa-sweep/" + function;
        batch.out_dir = dir.c_str();
        st = psaes_kappa_sweep(h.cfg, kappas.empty() ? nullptr : kappas.data(), kappas.size(), &batch);
    }
    else if (compare->parsed())
    {
        dir = root + "/compare/" + function;
        batch.out_dir = dir.c_str();
        st = psaes_compare(h.cfg, &batch);
    }

    if (st == PSAES_OK)
        return kExitOk;
    if (st == PSAES_ERR_INVALID_ARGUMENT)
    {
        std::fprintf(stderr, "usage error: %s\n", psaes_last_error());
        return kExitUsage;
    }
    std::fprintf(stderr, "error (%s): %s\n", psaes_status_name(st), psaes_last_error());
    if (st != PSAES_ERR_RUN_FAILED)
        std::fprintf(stderr, "config:\n%s", config_text(h.cfg).c_str());
    return kExitRuntime;
}

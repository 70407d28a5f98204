#include "psaes/experiments.hpp"
#include "psaes/trace.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

using namespace psaes;
namespace fs = std::filesystem;

namespace
{
    struct TempDir
    {
        fs::path path;
        TempDir()
        {
            std::random_device rd;
            path = fs::temp_directory_path() / ("psaes-test-" + std::to_string(rd()));
            fs::create_directories(path);
        }
        ~TempDir() { fs::remove_all(path); }
    };

    std::vector<std::vector<std::string>> read_csv(const fs::path &p)
    {
        std::ifstream in(p);
        std::vector<std::vector<std::string>> rows;
        std::string line;
        while (std::getline(in, line))
        {
            std::vector<std::string> cells;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ','))
                cells.push_back(cell);
            if (!line.empty() && line.back() == ',')
                cells.emplace_back();
            rows.push_back(cells);
        }
        return rows;
    }

    // header equals the documented schema and every row has the same width
    void check_schema(const fs::path &p, const std::vector<std::string> &cols)
    {
        CAPTURE(p.string());
        const auto rows = read_csv(p);
        REQUIRE(rows.size() >= 2);
        CHECK(rows.front() == cols);
        for (const auto &r : rows)
            CHECK(r.size() == cols.size());
    }

    std::string slurp(const fs::path &p)
    {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    // drop the named columns so reruns can be compared byte for byte
    std::string without_columns(const fs::path &p, const std::vector<std::string> &drop)
    {
        const auto rows = read_csv(p);
        std::vector<bool> keep(rows.front().size(), true);
        for (std::size_t i = 0; i < keep.size(); ++i)
            for (const auto &d : drop)
                if (rows.front()[i] == d)
                    keep[i] = false;
        std::string out;
        for (const auto &r : rows)
        {
            for (std::size_t i = 0; i < r.size(); ++i)
                if (keep[i])
                    out += r[i] + ",";
            out += "\n";
        }
        return out;
    }

    RunConfig base(const std::string &fn)
    {
        RunConfig c;
        c.function = fn;
        c.mc_samples = 16;
        return c;
    }
}

TEST_CASE("composite metrics")
{
    CHECK(s_f(0, 0, 0) == 0.0);
    CHECK(s_f(31.98, 6.03, 6.00) == doctest::Approx(44.01));
    CHECK(sum_complexity(31.9806, 6.0328, 6.00, 15) == doctest::Approx(59.0134).epsilon(1e-12));
    CHECK(s_f(1.0, 2.0, 3.5) > s_f(1.0, 2.0, 3.0));
    CHECK(s_f(1.0, 2.5, 3.0) > s_f(1.0, 2.0, 3.0));
    CHECK(s_f(1.5, 2.0, 3.0) > s_f(1.0, 2.0, 3.0));
}

TEST_CASE("aggregate skips failed runs and reduces in seed order")
{
    std::vector<RunRecord> rs(3);
    rs[0].summary.seed = 3;
    rs[0].summary.gap = 1.0;
    rs[0].summary.f_n = 6.0;
    rs[1].summary.seed = 1;
    rs[1].summary.gap = 3.0;
    rs[1].summary.f_n = 8.0;
    rs[2].summary.seed = 2;
    rs[2].summary.error = "boom";
    const Aggregate a = aggregate(rs);
    CHECK(a.runs == 3);
    CHECK(a.failures == 1);
    CHECK(a.mean_gap == doctest::Approx(2.0));
    CHECK(a.mean_fn == doctest::Approx(7.0));
}

TEST_CASE("run_many records failures without aborting")
{
    std::vector<RunConfig> cs = {base("rastrigin"), base("rastrigin")};
    cs[1].function = "nope";
    const auto out = run_many(cs, 2);
    CHECK(out[0].summary.error.empty());
    CHECK(!out[1].summary.error.empty());
}

TEST_CASE("experiment1 records sigma series under the forced schedule")
{
    const auto seeds = default_seeds(3);
    const Experiment1Result res = run_experiment1(LambdaSchedule::ForcedIncreasing, true, base("rastrigin"), seeds, 2);
    REQUIRE(res.runs.size() == 3);
    for (const auto &r : res.runs)
    {
        CHECK(r.config.algorithm == Algorithm::PsaGeneral);
        CHECK(r.config.schedule == LambdaSchedule::ForcedIncreasing);
        const auto s = sigma_series(r);
        REQUIRE(s.size() == r.trace.size() + 1);
        CHECK(s.front() == r.summary.sigma0);
        for (std::size_t g = 1; g < s.size(); ++g)
            CHECK(s[g] == r.trace[g - 1].sigma_post_correction);
    }
    const Experiment1Result off = run_experiment1(LambdaSchedule::ForcedDecreasing, false, base("rastrigin"), seeds, 1);
    for (const auto &r : off.runs)
        CHECK(r.config.algorithm == Algorithm::PsaNoCorrection);
}

TEST_CASE("kappa sweep end points")
{
    const auto seeds = default_seeds(2);
    RunConfig c = base("schaffer");
    c.max_gens = 5;
    std::vector<RunRecord> runs;
    const auto rows = run_kappa_sweep(c, {0.0, 1.0}, seeds, 2, &runs);
    REQUIRE(rows.size() == 2);
    CHECK(runs.size() == 4);
    CHECK(rows[0].s_f == doctest::Approx(s_f(rows[0].agg.mean_cpu, rows[0].agg.mean_gap, rows[0].agg.mean_fn)));
    CHECK(rows[1].sum_complexity ==
          doctest::Approx(rows[1].s_f + rows[1].agg.mean_gens));

    // kappa 0 equals no correction, kappa 1 equals the general correction
    for (std::size_t i = 0; i < seeds.size(); ++i)
    {
        RunConfig none = c;
        none.seed = seeds[i];
        none.algorithm = Algorithm::PsaNoCorrection;
        RunConfig gen = none;
        gen.algorithm = Algorithm::PsaGeneral;
        CHECK(run_single(none).summary.val == runs[i].summary.val);
        CHECK(run_single(gen).summary.val == runs[seeds.size() + i].summary.val);
    }
    const auto k = default_kappas();
    REQUIRE(k.size() == 11);
    CHECK(k.front() == 0.0);
    CHECK(k.back() == doctest::Approx(1.0));
}

TEST_CASE("comparison is paired")
{
    const auto seeds = default_seeds(3);
    const ComparisonResult res = run_comparison(base("schaffer"), seeds, 2);
    REQUIRE(res.general.size() == 3);
    REQUIRE(res.reformulated.size() == 3);
    for (std::size_t i = 0; i < 3; ++i)
    {
        CHECK(res.general[i].config.seed == res.reformulated[i].config.seed);
        CHECK(res.general[i].config.algorithm == Algorithm::PsaGeneral);
        CHECK(res.reformulated[i].config.algorithm == Algorithm::PsaReformulated);
        // same seed, same initial point
        CHECK(res.general[i].summary.sigma0 == res.reformulated[i].summary.sigma0);
    }
}

TEST_CASE("emitted CSVs follow the documented schemas")
{
    TempDir tmp;
    const auto seeds = default_seeds(2);

    const RunRecord one = run_single(base("rastrigin"));
    const auto trace_paths = emit_run(one, tmp.path / "run", false);
    REQUIRE(trace_paths.size() == 1);
    check_schema(trace_paths[0], trace_columns(2));
    CHECK(trace_columns(2) == std::vector<std::string>{"run_id", "g", "lambda_real", "lambda_r",
                                                       "sigma_pre_correction", "sigma_post_correction",
                                                       "correction_branch", "p_sigma_norm", "f_best", "f_of_mean",
                                                       "m_1", "m_2", "fevals_cumulative", "wall_micros"});
    CHECK_THROWS_AS(emit_run(one, tmp.path / "run", false), IoFailure);
    CHECK_NOTHROW(emit_run(one, tmp.path / "run", true));

    const auto e1 = run_experiment1(LambdaSchedule::ForcedIncreasing, true, base("rastrigin"), seeds, 1);
    emit_experiment1(e1, "experiment1", tmp.path / "e1", false);
    check_schema(tmp.path / "e1" / "sigma_series.csv", sigma_series_columns());
    check_schema(tmp.path / "e1" / "summary.csv", summary_columns());
    CHECK(fs::exists(tmp.path / "e1" / "summary.txt"));
    for (const auto &r : e1.runs)
        check_schema(tmp.path / "e1" / "traces" / (r.summary.run_id + ".csv"), trace_columns(2));

    RunConfig sc = base("schaffer");
    sc.max_gens = 3;
    std::vector<RunRecord> runs;
    const auto rows = run_kappa_sweep(sc, {0.0, 0.5}, seeds, 1, &runs);
    emit_kappa_sweep(rows, runs, tmp.path / "sweep", false);
    check_schema(tmp.path / "sweep" / "sweep.csv", sweep_columns());
    check_schema(tmp.path / "sweep" / "runs.csv", summary_columns());
    CHECK(slurp(tmp.path / "sweep" / "summary.txt").find("argmin S_f") != std::string::npos);

    const auto cmp = run_comparison(base("schaffer"), seeds, 1);
    emit_comparison(cmp, tmp.path / "cmp", false);
    check_schema(tmp.path / "cmp" / "averages.csv", comparison_columns());
    check_schema(tmp.path / "cmp" / "runs.csv", summary_columns());
}

TEST_CASE("reruns reproduce outputs apart from timing columns")
{
    TempDir tmp;
    const auto seeds = default_seeds(2);
    const auto a = run_comparison(base("schaffer"), seeds, 2);
    const auto b = run_comparison(base("schaffer"), seeds, 1);
    emit_comparison(a, tmp.path / "a", false);
    emit_comparison(b, tmp.path / "b", false);
    for (const auto &r : a.general)
    {
        const std::string f = r.summary.run_id + ".csv";
        CHECK(without_columns(tmp.path / "a" / "traces" / f, {"wall_micros"}) ==
              without_columns(tmp.path / "b" / "traces" / f, {"wall_micros"}));
    }
    CHECK(without_columns(tmp.path / "a" / "runs.csv", {"cpu_seconds"}) ==
          without_columns(tmp.path / "b" / "runs.csv", {"cpu_seconds"}));
}

TEST_CASE("format_double keeps 17 significant digits")
{
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(std::stod(format_double(M_PI)) == M_PI);
}

TEST_CASE("RunConfig set, validate and text round trip")
{
    RunConfig c;
    c.set("function", "schaffer");
    c.set("dim", "3");
    c.set("seed", "17");
    c.set("algorithm", "psa-general");
    c.set("kappa", "0.3");
    c.set("L", "4");
    c.set("max-gens", "12");
    c.set("tol", "0.001");
    c.set("schedule", "frozen");
    c.set("mc-samples", "64");
    c.set("mu-proxy", "f-of-m");
    c.set("sigma-scale", "false");
    c.set("fisher", "distribution");
    c.set("clamp", "true");
    c.set("time-budget", "2.5");
    c.set("run-id", "custom");
    CHECK_NOTHROW(c.validate());

    RunConfig back;
    apply_config_text(back, c.to_text());
    CHECK(back.to_text() == c.to_text());
    CHECK(back.function == "schaffer");
    CHECK(back.dim == 3);
    CHECK(back.kappa == 0.3);
    CHECK(back.mu_proxy == MuProxyMode::FOfMean);
    CHECK(back.fisher == FisherMetric::Distribution);
    CHECK(back.effective_run_id() == "custom");
    CHECK(RunConfig::keys().size() == 16);

    RunConfig d;
    CHECK_THROWS_AS(d.set("kappa", "1.5"), InvalidArgument);
    CHECK_THROWS_AS(d.set("kapa", "0.5"), InvalidArgument);
    CHECK_THROWS_AS(d.set("dim", "two"), InvalidArgument);
    CHECK_THROWS_AS(d.set("algorithm", "psa"), InvalidArgument);
    CHECK_THROWS_AS(d.set("tol", "0"), InvalidArgument);
    CHECK_THROWS_AS(d.set("max-gens", "0"), InvalidArgument);

    RunConfig zero;
    zero.kappa = 0.0;
    CHECK_THROWS_AS(zero.validate(), InvalidArgument);
    zero.algorithm = Algorithm::PsaScaled;
    CHECK_NOTHROW(zero.validate());

    RunConfig forced;
    forced.algorithm = Algorithm::CmaEs;
    forced.schedule = LambdaSchedule::ForcedIncreasing;
    CHECK_THROWS_AS(forced.validate(), InvalidArgument);

    CHECK(default_max_gens("rastrigin") == 20);
    CHECK(default_max_gens("schaffer") == 10);
    RunConfig plain;
    CHECK(plain.effective_run_id() == "rastrigin-psa-reformulated-s1");
    CHECK(plain.effective_max_gens() == 20);

    RunConfig txt;
    apply_config_text(txt, "# comment\n\nseed = 9\nfunction=sphere # trailing\n");
    CHECK(txt.seed == 9);
    CHECK(txt.function == "sphere");
    CHECK_THROWS_AS(apply_config_text(txt, "seed\n"), InvalidArgument);
}

#pragma once

#include "psaes/optimizer.hpp"
#include "psaes/run_config.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace psaes
{
    struct RunSummary
    {
        std::string run_id;
        std::uint64_t seed = 0;
        std::string algorithm;
        double kappa = 0.0;
        double cpu_seconds = 0.0;
        double val = 0.0; // min over the trace of f_best
        double gap = 0.0; // |f* - val|
        double f_n = 0.0; // fevals / generations
        std::size_t generations = 0;
        double sigma0 = 0.0;
        double final_sigma = 0.0;
        std::size_t guard_trips = 0;
        std::size_t repairs = 0;
        std::size_t invariant_violations = 0;
        bool budget_hit = false;
        std::string error; // empty when the run completed
    };

    struct RunRecord
    {
        RunConfig config;
        std::vector<TraceRow> trace;
        RunSummary summary;
        InvariantReport invariants;
    };

    /// Runs until the stopping rule fires. Throws on run failure.
    RunRecord run_single(const RunConfig &config);

    /// Runs every config, `jobs` at a time. A failing run is reported in its
    /// summary.error instead of aborting the batch. Output order matches input.
    std::vector<RunRecord> run_many(const std::vector<RunConfig> &configs, std::size_t jobs);

    std::vector<std::uint64_t> default_seeds(std::size_t count = 20);

    double s_f(double mean_cpu, double mean_gap, double mean_fn);
    double sum_complexity(double mean_cpu, double mean_gap, double mean_fn, double mean_gens);

    struct Aggregate
    {
        std::size_t runs = 0;
        std::size_t failures = 0;
        double mean_cpu = 0.0;
        double mean_val = 0.0;
        double mean_gap = 0.0;
        double mean_fn = 0.0;
        double mean_gens = 0.0;
    };

    /// Means over completed runs, reduced in seed order.
    Aggregate aggregate(const std::vector<RunRecord> &records);

    // Forced-schedule experiments. with_correction selects psa-general,
    // otherwise psa-no-correction.
    struct Experiment1Result
    {
        LambdaSchedule direction = LambdaSchedule::ForcedIncreasing;
        bool with_correction = true;
        std::vector<RunRecord> runs;
    };

    Experiment1Result run_experiment1(LambdaSchedule direction, bool with_correction, const RunConfig &base,
                                      const std::vector<std::uint64_t> &seeds, std::size_t jobs);

    /// sigma^(g) for g = 0..G (sigma^(0) first), taken after correction.
    std::vector<double> sigma_series(const RunRecord &r);

    struct SweepRow
    {
        std::string function;
        double kappa = 0.0;
        Aggregate agg;
        double s_f = 0.0;
        double sum_complexity = 0.0;
    };

    std::vector<double> default_kappas();

    /// Runs psa-scaled for each kappa (kappa = 0 leaves sigma uncorrected).
    std::vector<SweepRow> run_kappa_sweep(const RunConfig &base, const std::vector<double> &kappas,
                                          const std::vector<std::uint64_t> &seeds, std::size_t jobs,
                                          std::vector<RunRecord> *runs_out = nullptr);

    struct ComparisonResult
    {
        std::vector<RunRecord> general;
        std::vector<RunRecord> reformulated;
        Aggregate general_agg;
        Aggregate reformulated_agg;
    };

    /// Paired runs of psa-general and psa-reformulated on the same seeds.
    ComparisonResult run_comparison(const RunConfig &base, const std::vector<std::uint64_t> &seeds, std::size_t jobs);

    // Output. Each returns the paths written.
    std::vector<std::filesystem::path> emit_run(const RunRecord &r, const std::filesystem::path &dir, bool force);
    std::vector<std::filesystem::path> emit_experiment1(const Experiment1Result &res, const std::string &name,
                                                        const std::filesystem::path &dir, bool force);
    std::vector<std::filesystem::path> emit_kappa_sweep(const std::vector<SweepRow> &rows,
                                                        const std::vector<RunRecord> &runs,
                                                        const std::filesystem::path &dir, bool force);
    std::vector<std::filesystem::path> emit_comparison(const ComparisonResult &res,
                                                       const std::filesystem::path &dir, bool force);

    std::vector<std::string> summary_columns();
    std::vector<std::string> sweep_columns();
    std::vector<std::string> sigma_series_columns();
    std::vector<std::string> comparison_columns();
}

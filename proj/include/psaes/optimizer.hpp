#pragma once

#include "psaes/benchmarks.hpp"
#include "psaes/es_core.hpp"
#include "psaes/psa_adapt.hpp"
#include "psaes/run_config.hpp"
#include "psaes/sigma_correct.hpp"

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

namespace psaes
{
    /// One CSV row per completed generation. g counts completed generations
    /// (first row has g = 1); lambda columns hold the values chosen for the
    /// next generation.
    struct TraceRow
    {
        std::string run_id;
        std::size_t g = 0;
        double lambda_real = 0.0;
        std::size_t lambda_r = 0;
        double sigma_pre_correction = 0.0;
        double sigma_post_correction = 0.0;
        int correction_branch = -1; // -1: no correction in this algorithm
        double p_sigma_norm = 0.0;
        double f_best = 0.0;
        double f_of_mean = 0.0;
        Vector mean;
        std::uint64_t fevals_cumulative = 0;
        std::int64_t wall_micros = 0;

        // kept out of the CSV
        bool guard_tripped = false;
        bool repaired = false;
        std::size_t lambda_used = 0;
    };

    /// Counts of broken invariants observed after each generation.
    struct InvariantReport
    {
        std::size_t generations_checked = 0;
        std::size_t asymmetric_c = 0;
        std::size_t c_below_floor = 0;
        std::size_t sigma_nonpositive = 0;
        std::size_t weights_not_normalized = 0;
        std::size_t lambda_out_of_bounds = 0;
        std::size_t gamma_out_of_range = 0;
        std::size_t branch_mismatch = 0;
        std::vector<std::string> messages; // first few, for diagnostics

        std::size_t total() const
        {
            return asymmetric_c + c_below_floor + sigma_nonpositive + weights_not_normalized + lambda_out_of_bounds +
                   gamma_out_of_range + branch_mismatch;
        }
    };

    /// lambda_r for the generation after `g` completed generations.
    ///   increasing: lambda0 + sum_{k=1..g} k(k+1)/2, capped at hi
    ///   decreasing: lambda0 - same sum, floored at lo
    std::size_t forced_lambda_schedule(std::size_t g, LambdaSchedule direction, std::size_t lambda0, std::size_t lo,
                                       std::size_t hi);

    class Optimizer
    {
    public:
        Optimizer(const RunConfig &config, ObjectiveFunction objective);

        /// Runs one generation. Throws ObjectiveFailure or StateCorruption.
        TraceRow step();

        /// Generation cap reached, optimum reached within tol, or time budget hit.
        bool done() const;
        bool budget_hit() const { return budget_hit_; }

        const DistributionState &state() const { return state_; }
        const EvolutionPaths &paths() const { return paths_; }
        const PsaState &psa() const { return psa_; }
        const RunConfig &config() const { return config_; }
        const ObjectiveFunction &objective() const { return objective_; }
        const InvariantReport &invariants() const { return invariants_; }
        double sigma0() const { return sigma0_; }
        double best_f() const { return best_f_; }
        std::uint64_t fevals() const { return fevals_; }
        std::size_t guard_trips() const { return guard_trips_; }
        std::size_t repairs() const { return repairs_; }

    private:
        double mu_proxy(const Vector &m) const;
        double evaluate(const Vector &x) const;
        void check_invariants(const StrategyParams &params, const TraceRow &row);

        RunConfig config_;
        ObjectiveFunction objective_;
        DistributionState state_;
        EvolutionPaths paths_;
        PsaState psa_;
        double sigma0_ = 0.0;
        double best_f_;
        std::uint64_t fevals_ = 0;
        std::size_t guard_trips_ = 0;
        std::size_t repairs_ = 0;
        bool budget_hit_ = false;
        InvariantReport invariants_;
        std::chrono::steady_clock::time_point start_;
    };
}

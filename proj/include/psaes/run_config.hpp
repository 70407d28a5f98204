#pragma once

#include "psaes/psa_adapt.hpp"
#include "psaes/sigma_correct.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace psaes
{
    enum class Algorithm
    {
        CmaEs,           // fixed lambda, no correction
        PsaGeneral,      // correction every generation
        PsaReformulated, // conditional correction
        PsaNoCorrection, // population-size adaptation only
        PsaScaled,       // sigma kappa rho'/rho every generation (kappa sweep)
    };

    enum class LambdaSchedule
    {
        Adaptive,
        ForcedIncreasing,
        ForcedDecreasing,
        Frozen,
    };

    std::string to_string(Algorithm a);
    std::string to_string(LambdaSchedule s);
    std::string to_string(MuProxyMode m);
    std::string to_string(FisherMetric f);

    Algorithm parse_algorithm(std::string_view s);
    LambdaSchedule parse_schedule(std::string_view s);
    MuProxyMode parse_mu_proxy(std::string_view s);
    FisherMetric parse_fisher(std::string_view s);

    struct RunConfig
    {
        std::string function = "rastrigin";
        std::size_t dim = 2;
        std::uint64_t seed = 1;
        Algorithm algorithm = Algorithm::PsaReformulated;
        double kappa = 0.5;
        double L = 6.0;
        std::size_t max_gens = 0; // 0: per-function default
        double tol = 1e-2;
        LambdaSchedule schedule = LambdaSchedule::Adaptive;
        std::size_t mc_samples = 128;
        MuProxyMode mu_proxy = MuProxyMode::MeanOfMean;
        bool sigma_scale = true;
        FisherMetric fisher = FisherMetric::Shape;
        bool clamp = false;
        double time_budget = 0.0; // seconds per run, 0 disables
        std::string run_id;       // empty: derived from the other fields

        /// Set one field by its flag name (without leading dashes).
        /// Throws InvalidArgument on unknown keys or values out of range.
        void set(std::string_view key, std::string_view value);

        /// Cross-field checks. Throws InvalidArgument.
        void validate() const;

        std::size_t effective_max_gens() const;
        std::string effective_run_id() const;

        CorrectionConfig correction() const;

        /// key=value lines accepted back by set().
        std::string to_text() const;

        static const std::vector<std::string> &keys();
    };

    /// Default generation cap: 20 rastrigin, 10 schaffer, 250 sphere.
    std::size_t default_max_gens(const std::string &function);

    /// Parse key=value lines; '#' starts a comment, blank lines are skipped.
    void apply_config_text(RunConfig &cfg, std::string_view text);
}

#pragma once

#include "psaes/es_core.hpp"

#include <cstddef>
#include <cstdint>

namespace psaes
{
    struct PsaState
    {
        Vector p_theta;
        double gamma_theta = 0.0;
        double lambda_real = 0.0;
        std::size_t lambda_r = 0;
        std::size_t lambda_min = 0;
        std::size_t lambda_max = 0;
        double alpha = 1.4;
        double beta = 0.4;

        /// lambda starts at default_lambda(n), bounded to [lambda_def, 512 lambda_def].
        static PsaState initial(std::size_t n);
    };

    struct ParamDelta
    {
        Vector delta_m;
        Vector delta_sigma_vech;

        Vector concat() const;
    };

    /// Length of vech for an n x n symmetric matrix.
    inline std::size_t vech_size(std::size_t n) { return n * (n + 1) / 2; }

    /// 1-based position of entry (i, j), i >= j, in the column-stacked lower
    /// triangle: i - j + 1 + sum_{k<j} (n - k + 1).
    std::size_t vech_index(std::size_t i, std::size_t j, std::size_t n);

    Vector vech(const Matrix &A);
    Matrix unvech(const Vector &v, std::size_t n);

    /// (m' - m, vech(sigma'^2 C' - sigma^2 C)).
    ParamDelta compute_delta_theta(const DistributionState &old_state, const DistributionState &new_state);

    /// Which matrix whitens the update.
    ///   Distribution: Sigma = sigma^2 C, the exact Gaussian Fisher metric.
    ///   Shape:        C alone, so the normalized step carries the scale of sigma.
    enum class FisherMetric
    {
        Distribution,
        Shape,
    };

    /// sqrt(F) applied to delta: W^{-1/2} dm stacked on the vech of
    /// W^{-1/2} dSigma W^{-1/2} with diagonal entries divided by sqrt(2).
    Vector fisher_sqrt_apply(const ParamDelta &delta, const DistributionState &old_state,
                             FisherMetric metric = FisherMetric::Distribution);

    /// Monte Carlo estimate of E||sqrt(F) dtheta||^2 under fitness-independent
    /// ranking. Sample k draws from its own substream (seed, generation, k).
    /// Always uses the Distribution metric.
    double estimate_expected_sqnorm(const DistributionState &state, const EvolutionPaths &paths,
                                    const StrategyParams &params, std::uint64_t seed, std::size_t M);

    Vector update_p_theta(const PsaState &psa, const Vector &normalized_step, double expected_sqnorm);

    double advance_gamma_theta(double gamma_theta, double beta);

    /// round-half-away-from-zero, then clamp to [lo, hi].
    std::size_t round_and_bound(double lambda_real, std::size_t lo, std::size_t hi);

    struct LambdaUpdate
    {
        double lambda_real = 0.0;
        std::size_t lambda_r = 0;
    };

    /// Expects psa.p_theta and psa.gamma_theta already advanced.
    LambdaUpdate update_lambda(const PsaState &psa);
}

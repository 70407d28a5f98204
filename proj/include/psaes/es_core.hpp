#pragma once

#include "psaes/rng.hpp"
#include "psaes/types.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace psaes
{
    /// Cached factorization C = B diag(d^2) B^T.
    struct EigenSystem
    {
        Matrix basis;      // B, orthonormal columns
        Vector axis;       // d, square roots of the eigenvalues
        Matrix inv_sqrt;   // C^{-1/2} = B diag(1/d) B^T
        double min_eigenvalue = 0.0;
    };

    /// Throws StateCorruption when C is not symmetric positive definite or not finite.
    EigenSystem decompose(const Matrix &C);

    /// N(m, sigma^2 C), plus the factorization of C used for sampling and whitening.
    struct DistributionState
    {
        Vector mean;
        double sigma = 1.0;
        Matrix cov;
        std::size_t generation = 0;
        EigenSystem eigen;

        static DistributionState initial(const Vector &m0, double sigma0);

        std::size_t dimension() const { return static_cast<std::size_t>(mean.size()); }
        void refresh_eigen() { eigen = decompose(cov); }
    };

    struct EvolutionPaths
    {
        Vector p_sigma;
        Vector p_c;
        double gamma_sigma = 0.0;
        double gamma_c = 0.0;

        static EvolutionPaths zeros(std::size_t n);
    };

    /// Constants that depend on the population size in use. Recomputed every
    /// generation because lambda_r can change.
    struct StrategyParams
    {
        std::size_t lambda_r = 0;
        std::size_t mu = 0;
        std::vector<double> weights; // length lambda_r, zero beyond mu
        double mu_w = 1.0;
        double c_sigma = 0.0;
        double d_sigma = 1.0;
        double c_c = 0.0;
        double c_1 = 0.0;
        double c_mu = 0.0;
        double c_m = 1.0;
    };

    std::size_t default_lambda(std::size_t n);
    StrategyParams derive_params(std::size_t lambda_r, std::size_t n);

    /// sqrt(n) (1 - 1/(4n) + 1/(21 n^2)), the usual approximation of E||N(0, I)||.
    double expected_norm(std::size_t n);

    /// Candidates as columns, x_k = m + sigma B D z_k.
    Matrix sample_population(const DistributionState &state, std::size_t lambda, rng::Engine &engine);

    /// Indices sorted by ascending fitness; ties keep sampling order.
    std::vector<std::size_t> rank_order(std::span<const double> fitness);

    /// Columns of `points` rearranged in rank order.
    Matrix select_ranked(const Matrix &points, std::span<const std::size_t> order);

    Vector update_mean(const Vector &m, const Matrix &ranked, const StrategyParams &params);

    Vector update_p_sigma(const Vector &p_sigma, const DistributionState &old_state, const Vector &m_new,
                          const StrategyParams &params);

    double update_sigma_csa(double sigma, double p_sigma_norm, double gamma_sigma_new, const StrategyParams &params,
                            std::size_t n);

    struct PcUpdate
    {
        Vector p_c;
        bool h_sigma = true;
    };

    bool heaviside_sigma(double p_sigma_norm, double gamma_sigma_new, std::size_t n);

    PcUpdate update_p_c_and_h(const Vector &p_c, double p_sigma_norm, double gamma_sigma_new,
                              const DistributionState &old_state, const Vector &m_new,
                              const StrategyParams &params);

    struct Gammas
    {
        double sigma = 0.0;
        double c = 0.0;
    };

    Gammas update_gammas(double gamma_sigma, double gamma_c, const StrategyParams &params, bool h_sigma);

    struct CovarianceUpdate
    {
        Matrix cov;
        bool repaired = false;
    };

    /// Rank-one plus rank-mu update; the rank-mu outer products are taken about
    /// the old mean and divided by the old sigma^2.
    CovarianceUpdate update_covariance(const DistributionState &old_state, const Vector &p_c_new, double gamma_c_new,
                                       const Matrix &ranked, const StrategyParams &params);

    /// Lower bound enforced on the eigenvalues of C after each update.
    double eigen_floor(const Matrix &C);

    /// Symmetrize and lift eigenvalues below eigen_floor. Sets `repaired` when
    /// the floor had to be applied.
    Matrix repair_covariance(const Matrix &C, bool &repaired);

    struct GenerationUpdate
    {
        DistributionState state; // sigma is the CSA value, before any correction
        EvolutionPaths paths;
        double p_sigma_norm = 0.0;
        bool h_sigma = true;
        bool repaired = false;
    };

    /// One CMA-ES update from ranked candidates (best first). Does not touch
    /// the population size or apply any step-size correction.
    GenerationUpdate cma_update(const DistributionState &old_state, const EvolutionPaths &paths,
                                const StrategyParams &params, const Matrix &ranked);
}

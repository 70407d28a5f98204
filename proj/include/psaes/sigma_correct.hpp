#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace psaes
{
    /// Scalar location fed into the order-statistic approximation.
    enum class MuProxyMode
    {
        MeanOfMean, // arithmetic mean of the coordinates of m
        FOfMean,    // objective value at m
    };

    struct CorrectionConfig
    {
        double kappa = 0.5;
        double L = 6.0;
        MuProxyMode mu_proxy_mode = MuProxyMode::MeanOfMean;
        bool include_sigma_scale = true;
    };

    struct RhoInputs
    {
        std::size_t lambda_r = 0;
        std::vector<double> weights; // length lambda_r, zero beyond mu
        double mu_w = 1.0;
        std::size_t n = 1;
        double mu_proxy = 0.0;
        double sigma = 1.0;
        bool include_sigma_scale = true;
    };

    inline constexpr double kBlomAlpha = 0.375;

    /// E[N_{i:lambda}] ~ mu + s Phi^{-1}((i - 0.375) / (lambda + 0.25)), i 1-based.
    double expected_order_stat(std::size_t i, const RhoInputs &in);

    /// S = -sum_i w_i E[N_{i:lambda}].
    double order_stat_sum(const RhoInputs &in);

    /// n S mu_w / (n - 1 + S^2 mu_w); empty when S <= 0.
    std::optional<double> rho(const RhoInputs &in);

    enum class Branch : int
    {
        Skipped = 0,   // ||p_sigma|| >= E||N(0,I)||
        Scaled = 1,    // sigma kappa rho'/rho
        FullRatio = 2, // sigma rho'/rho
        Always = 3,    // unconditional correction
    };

    struct CorrectionResult
    {
        double sigma = 0.0;
        Branch branch = Branch::Always;
        bool guard_tripped = false; // a rho was undefined, ratio taken as 1
    };

    /// rho_new / rho_old, or 1 with guard_tripped when either side is missing.
    double correction_ratio(std::optional<double> rho_new, std::optional<double> rho_old, bool &guard_tripped);

    CorrectionResult correct_general(double sigma_new, std::optional<double> rho_new, std::optional<double> rho_old);

    CorrectionResult correct_reformulated(double sigma_new, std::optional<double> rho_new,
                                          std::optional<double> rho_old, double p_sigma_norm, double expected_norm_n,
                                          std::size_t lambda_new, std::size_t lambda_old,
                                          const CorrectionConfig &config);

    /// sigma kappa rho'/rho applied every generation; kappa = 0 leaves sigma alone.
    CorrectionResult correct_scaled(double sigma_new, std::optional<double> rho_new, std::optional<double> rho_old,
                                    double kappa);

    inline constexpr double kMuWSlope = 0.2642;
    inline constexpr double kMuWIntercept = 0.5328;

    double mu_w_fit(std::size_t lambda);
    double delta_for_L(double L);

    /// rho at each consecutive pair of mu_proxy values (lambda, weights fixed).
    /// Empty entries mark pairs where either rho is undefined.
    std::vector<std::optional<double>> rho_ratios(const RhoInputs &base, std::span<const double> mu_proxies);

    /// True iff every consecutive ratio is defined and >= 1 - 1e-12.
    bool rho_ratio_check(const RhoInputs &base, std::span<const double> mu_proxies);
}

#include "psaes/sigma_correct.hpp"
#include "psaes/types.hpp"

#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <string>

namespace psaes
{
    double expected_order_stat(std::size_t i, const RhoInputs &in)
    {
        if (i < 1 || i > in.lambda_r)
            throw InvalidArgument("order statistic rank " + std::to_string(i) + " outside 1.." +
                                  std::to_string(in.lambda_r));
        static const boost::math::normal_distribution<double> std_normal(0.0, 1.0);
        const double p = (static_cast<double>(i) - kBlomAlpha) /
                         (static_cast<double>(in.lambda_r) - 2.0 * kBlomAlpha + 1.0);
        const double s = in.include_sigma_scale ? in.sigma : 1.0;
        return in.mu_proxy + s * boost::math::quantile(std_normal, p);
    }

    double order_stat_sum(const RhoInputs &in)
    {
        if (in.weights.size() != in.lambda_r)
            throw InvalidArgument("weight vector length does not match lambda_r");
        double s = 0.0;
        for (std::size_t i = 1; i <= in.lambda_r; ++i)
            if (in.weights[i - 1] != 0.0)
                s -= in.weights[i - 1] * expected_order_stat(i, in);
        return s;
    }

    std::optional<double> rho(const RhoInputs &in)
    {
        const double S = order_stat_sum(in);
        if (!(S > 0.0))
            return std::nullopt;
        const double n = static_cast<double>(in.n);
        return n * S * in.mu_w / (n - 1.0 + S * S * in.mu_w);
    }

    double correction_ratio(std::optional<double> rho_new, std::optional<double> rho_old, bool &guard_tripped)
    {
        guard_tripped = false;
        if (!rho_new || !rho_old || !(*rho_old > 0.0) || !(*rho_new > 0.0))
        {
            guard_tripped = true;
            return 1.0;
        }
        return *rho_new / *rho_old;
    }

    CorrectionResult correct_general(double sigma_new, std::optional<double> rho_new, std::optional<double> rho_old)
    {
        CorrectionResult r;
        r.branch = Branch::Always;
        r.sigma = sigma_new * correction_ratio(rho_new, rho_old, r.guard_tripped);
        return r;
    }

    CorrectionResult correct_reformulated(double sigma_new, std::optional<double> rho_new,
                                          std::optional<double> rho_old, double p_sigma_norm, double expected_norm_n,
                                          std::size_t lambda_new, std::size_t lambda_old,
                                          const CorrectionConfig &config)
    {
        CorrectionResult r;
        if (p_sigma_norm >= expected_norm_n)
        {
            r.branch = Branch::Skipped;
            r.sigma = sigma_new;
            return r;
        }
        const double ratio = correction_ratio(rho_new, rho_old, r.guard_tripped);
        const double dl = std::abs(static_cast<double>(lambda_new) - static_cast<double>(lambda_old));
        if (dl < config.L)
        {
            r.branch = Branch::Scaled;
            r.sigma = sigma_new * config.kappa * ratio;
        }
        else
        {
            r.branch = Branch::FullRatio;
            r.sigma = sigma_new * ratio;
        }
        return r;
    }

    CorrectionResult correct_scaled(double sigma_new, std::optional<double> rho_new, std::optional<double> rho_old,
                                    double kappa)
    {
        CorrectionResult r;
        r.branch = Branch::Always;
        if (kappa == 0.0)
        {
            r.sigma = sigma_new;
            return r;
        }
        r.sigma = sigma_new * kappa * correction_ratio(rho_new, rho_old, r.guard_tripped);
        return r;
    }

    double mu_w_fit(std::size_t lambda)
    {
        return kMuWSlope * static_cast<double>(lambda) + kMuWIntercept;
    }

    double delta_for_L(double L)
    {
        return kMuWSlope * L;
    }

    std::vector<std::optional<double>> rho_ratios(const RhoInputs &base, std::span<const double> mu_proxies)
    {
        std::vector<std::optional<double>> out;
        if (mu_proxies.size() < 2)
            return out;
        RhoInputs cur = base;
        cur.mu_proxy = mu_proxies[0];
        std::optional<double> prev = rho(cur);
        for (std::size_t k = 1; k < mu_proxies.size(); ++k)
        {
            cur.mu_proxy = mu_proxies[k];
            std::optional<double> next = rho(cur);
            if (prev && next)
                out.push_back(*next / *prev);
            else
                out.push_back(std::nullopt);
            prev = next;
        }
        return out;
    }

    bool rho_ratio_check(const RhoInputs &base, std::span<const double> mu_proxies)
    {
        for (const auto &r : rho_ratios(base, mu_proxies))
            if (!r || *r < 1.0 - 1e-12)
                return false;
        return true;
    }
}

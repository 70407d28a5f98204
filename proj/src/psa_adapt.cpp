#include "psaes/psa_adapt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace psaes
{
    PsaState PsaState::initial(std::size_t n)
    {
        PsaState s;
        const std::size_t ld = default_lambda(n);
        s.p_theta = Vector::Zero(static_cast<Eigen::Index>(n + vech_size(n)));
        s.gamma_theta = 0.0;
        s.lambda_real = static_cast<double>(ld);
        s.lambda_r = ld;
        s.lambda_min = ld;
        s.lambda_max = 512 * ld;
        return s;
    }

    Vector ParamDelta::concat() const
    {
        Vector out(delta_m.size() + delta_sigma_vech.size());
        out << delta_m, delta_sigma_vech;
        return out;
    }

    std::size_t vech_index(std::size_t i, std::size_t j, std::size_t n)
    {
        if (j < 1 || i < j || i > n)
            throw InvalidArgument("vech_index: need 1 <= j <= i <= n, got (" + std::to_string(i) + ", " +
                                  std::to_string(j) + ") with n = " + std::to_string(n));
        std::size_t offset = 0;
        for (std::size_t k = 1; k < j; ++k)
            offset += n - k + 1;
        return i - j + 1 + offset;
    }

    Vector vech(const Matrix &A)
    {
        const auto n = static_cast<std::size_t>(A.rows());
        Vector v(static_cast<Eigen::Index>(vech_size(n)));
        for (std::size_t j = 1; j <= n; ++j)
            for (std::size_t i = j; i <= n; ++i)
                v(static_cast<Eigen::Index>(vech_index(i, j, n) - 1)) =
                    A(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(j - 1));
        return v;
    }

    Matrix unvech(const Vector &v, std::size_t n)
    {
        if (static_cast<std::size_t>(v.size()) != vech_size(n))
            throw InvalidArgument("unvech: vector length " + std::to_string(v.size()) + " does not match n = " +
                                  std::to_string(n));
        Matrix A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (std::size_t j = 1; j <= n; ++j)
            for (std::size_t i = j; i <= n; ++i)
            {
                const double x = v(static_cast<Eigen::Index>(vech_index(i, j, n) - 1));
                A(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(j - 1)) = x;
                A(static_cast<Eigen::Index>(j - 1), static_cast<Eigen::Index>(i - 1)) = x;
            }
        return A;
    }

    ParamDelta compute_delta_theta(const DistributionState &old_state, const DistributionState &new_state)
    {
        if (old_state.dimension() != new_state.dimension())
            throw InvalidArgument("compute_delta_theta: dimension mismatch");
        ParamDelta d;
        d.delta_m = new_state.mean - old_state.mean;
        const Matrix dS = new_state.sigma * new_state.sigma * new_state.cov -
                          old_state.sigma * old_state.sigma * old_state.cov;
        d.delta_sigma_vech = vech(dS);
        return d;
    }

    Vector fisher_sqrt_apply(const ParamDelta &delta, const DistributionState &old_state, FisherMetric metric)
    {
        const std::size_t n = old_state.dimension();
        const double s = metric == FisherMetric::Distribution ? old_state.sigma : 1.0;
        if (!(s > 0.0) || !std::isfinite(s))
            throw StateCorruption("fisher_sqrt_apply: singular Sigma");

        // Sigma^{-1/2} = C^{-1/2} / sigma
        const Matrix W = old_state.eigen.inv_sqrt / s;
        const Vector a = W * delta.delta_m;
        const Matrix B = W * unvech(delta.delta_sigma_vech, n) * W;

        Vector b = vech(B);
        for (std::size_t j = 1; j <= n; ++j)
            b(static_cast<Eigen::Index>(vech_index(j, j, n) - 1)) /= std::sqrt(2.0);

        Vector out(a.size() + b.size());
        out << a, b;
        return out;
    }

    double estimate_expected_sqnorm(const DistributionState &state, const EvolutionPaths &paths,
                                    const StrategyParams &params, std::uint64_t seed, std::size_t M)
    {
        if (M == 0)
            throw InvalidArgument("Monte Carlo sample count must be at least 1");

        const std::size_t lambda = params.lambda_r;
        std::vector<double> sq(M);
        std::vector<std::size_t> perm(lambda);
        for (std::size_t k = 0; k < M; ++k)
        {
            rng::Engine eng = rng::make_engine(seed, state.generation, rng::Stream::NeutralUpdate, k);
            const Matrix x = sample_population(state, lambda, eng);
            std::iota(perm.begin(), perm.end(), std::size_t{0});
            std::shuffle(perm.begin(), perm.end(), eng);
            const GenerationUpdate upd = cma_update(state, paths, params, select_ranked(x, perm));
            sq[k] = fisher_sqrt_apply(compute_delta_theta(state, upd.state), state).squaredNorm();
        }

        // pairwise reduction keeps the sum independent of how samples were scheduled
        for (std::size_t width = 1; width < M; width *= 2)
            for (std::size_t i = 0; i + width < M; i += 2 * width)
                sq[i] += sq[i + width];
        return sq[0] / static_cast<double>(M);
    }

    Vector update_p_theta(const PsaState &psa, const Vector &normalized_step, double expected_sqnorm)
    {
        if (!(expected_sqnorm > 0.0) || !std::isfinite(expected_sqnorm))
            throw StateCorruption("population-size path: degenerate normalization " +
                                  std::to_string(expected_sqnorm));
        const double b = psa.beta;
        return (1.0 - b) * psa.p_theta + std::sqrt(b * (2.0 - b)) * normalized_step / std::sqrt(expected_sqnorm);
    }

    double advance_gamma_theta(double gamma_theta, double beta)
    {
        return (1.0 - beta) * (1.0 - beta) * gamma_theta + beta * (2.0 - beta);
    }

    std::size_t round_and_bound(double lambda_real, std::size_t lo, std::size_t hi)
    {
        if (std::isnan(lambda_real))
            throw StateCorruption("population size became NaN");
        const double r = std::round(lambda_real); // halves go away from zero
        if (r <= static_cast<double>(lo))
            return lo;
        if (r >= static_cast<double>(hi))
            return hi;
        return static_cast<std::size_t>(r);
    }

    LambdaUpdate update_lambda(const PsaState &psa)
    {
        LambdaUpdate out;
        const double expo = psa.beta * (psa.gamma_theta - psa.p_theta.squaredNorm() / psa.alpha);
        out.lambda_real = psa.lambda_real * std::exp(expo);
        out.lambda_r = round_and_bound(out.lambda_real, psa.lambda_min, psa.lambda_max);
        return out;
    }
}

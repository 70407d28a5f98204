#include "psaes/es_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace psaes
{
    EigenSystem decompose(const Matrix &C)
    {
        if (C.rows() != C.cols() || C.rows() == 0)
            throw StateCorruption("covariance matrix is not square");
        if (!C.allFinite())
            throw StateCorruption("covariance matrix has non-finite entries");

        Eigen::SelfAdjointEigenSolver<Matrix> solver(C);
        if (solver.info() != Eigen::Success)
            throw StateCorruption("eigendecomposition of C failed");

        const Vector &ev = solver.eigenvalues();
        if (!(ev.minCoeff() > 0.0))
            throw StateCorruption("covariance matrix is not positive definite (min eigenvalue " +
                                  std::to_string(ev.minCoeff()) + ")");

        EigenSystem out;
        out.basis = solver.eigenvectors();
        out.axis = ev.cwiseSqrt();
        out.inv_sqrt = out.basis * out.axis.cwiseInverse().asDiagonal() * out.basis.transpose();
        out.min_eigenvalue = ev.minCoeff();
        return out;
    }

    DistributionState DistributionState::initial(const Vector &m0, double sigma0)
    {
        if (m0.size() == 0)
            throw InvalidArgument("initial mean must have at least one coordinate");
        if (!(sigma0 > 0.0) || !std::isfinite(sigma0))
            throw InvalidArgument("initial step-size must be positive and finite");

        DistributionState s;
        s.mean = m0;
        s.sigma = sigma0;
        s.cov = Matrix::Identity(m0.size(), m0.size());
        s.generation = 0;
        s.refresh_eigen();
        return s;
    }

    EvolutionPaths EvolutionPaths::zeros(std::size_t n)
    {
        EvolutionPaths p;
        p.p_sigma = Vector::Zero(static_cast<Eigen::Index>(n));
        p.p_c = Vector::Zero(static_cast<Eigen::Index>(n));
        return p;
    }

    std::size_t default_lambda(std::size_t n)
    {
        if (n == 0)
            throw InvalidArgument("dimension must be at least 1");
        return 4 + static_cast<std::size_t>(std::floor(3.0 * std::log(static_cast<double>(n))));
    }

    StrategyParams derive_params(std::size_t lambda_r, std::size_t n)
    {
        if (lambda_r < 2)
            throw InvalidArgument("population size must be at least 2, got " + std::to_string(lambda_r));
        if (n == 0)
            throw InvalidArgument("dimension must be at least 1");

        StrategyParams p;
        const double dn = static_cast<double>(n);
        p.lambda_r = lambda_r;
        p.mu = lambda_r / 2;
        p.weights.assign(lambda_r, 0.0);

        const double log_half = std::log((static_cast<double>(lambda_r) + 1.0) / 2.0);
        double total = 0.0;
        for (std::size_t i = 0; i < p.mu; ++i)
        {
            p.weights[i] = log_half - std::log(static_cast<double>(i + 1));
            total += p.weights[i];
        }
        double sq = 0.0;
        for (std::size_t i = 0; i < p.mu; ++i)
        {
            p.weights[i] /= total;
            sq += p.weights[i] * p.weights[i];
        }
        p.mu_w = 1.0 / sq;

        const double mu_eff = p.mu_w;
        p.c_sigma = (mu_eff + 2.0) / (dn + mu_eff + 5.0);
        p.d_sigma = 1.0 + 2.0 * std::max(0.0, std::sqrt((mu_eff - 1.0) / (dn + 1.0)) - 1.0) + p.c_sigma;
        p.c_c = (4.0 + mu_eff / dn) / (dn + 4.0 + 2.0 * mu_eff / dn);
        p.c_1 = 2.0 / ((dn + 1.3) * (dn + 1.3) + mu_eff);
        p.c_mu = std::min(1.0 - p.c_1, 2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) / ((dn + 2.0) * (dn + 2.0) + mu_eff));
        p.c_m = 1.0;
        return p;
    }

    double expected_norm(std::size_t n)
    {
        const double dn = static_cast<double>(n);
        return std::sqrt(dn) * (1.0 - 1.0 / (4.0 * dn) + 1.0 / (21.0 * dn * dn));
    }

    Matrix sample_population(const DistributionState &state, std::size_t lambda, rng::Engine &engine)
    {
        const auto n = static_cast<Eigen::Index>(state.dimension());
        std::normal_distribution<double> gauss(0.0, 1.0);
        Matrix z(n, static_cast<Eigen::Index>(lambda));
        for (Eigen::Index k = 0; k < z.cols(); ++k)
            for (Eigen::Index i = 0; i < n; ++i)
                z(i, k) = gauss(engine);

        const Matrix bd = state.eigen.basis * state.eigen.axis.asDiagonal();
        Matrix x = (state.sigma * (bd * z)).colwise() + state.mean;
        return x;
    }

    std::vector<std::size_t> rank_order(std::span<const double> fitness)
    {
        std::vector<std::size_t> idx(fitness.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return fitness[a] < fitness[b]; });
        return idx;
    }

    Matrix select_ranked(const Matrix &points, std::span<const std::size_t> order)
    {
        Matrix out(points.rows(), static_cast<Eigen::Index>(order.size()));
        for (std::size_t k = 0; k < order.size(); ++k)
            out.col(static_cast<Eigen::Index>(k)) = points.col(static_cast<Eigen::Index>(order[k]));
        return out;
    }

    Vector update_mean(const Vector &m, const Matrix &ranked, const StrategyParams &params)
    {
        Vector step = Vector::Zero(m.size());
        for (std::size_t i = 0; i < params.mu; ++i)
            step += params.weights[i] * (ranked.col(static_cast<Eigen::Index>(i)) - m);
        return m + params.c_m * step;
    }

    Vector update_p_sigma(const Vector &p_sigma, const DistributionState &old_state, const Vector &m_new,
                          const StrategyParams &params)
    {
        const double cs = params.c_sigma;
        const Vector y = (m_new - old_state.mean) / old_state.sigma;
        return (1.0 - cs) * p_sigma + std::sqrt(cs * (2.0 - cs) * params.mu_w) * (old_state.eigen.inv_sqrt * y);
    }

    double update_sigma_csa(double sigma, double p_sigma_norm, double gamma_sigma_new, const StrategyParams &params,
                            std::size_t n)
    {
        const double drift = p_sigma_norm / expected_norm(n) - std::sqrt(gamma_sigma_new);
        return sigma * std::exp((params.c_sigma / params.d_sigma) * drift);
    }

    bool heaviside_sigma(double p_sigma_norm, double gamma_sigma_new, std::size_t n)
    {
        const double threshold = (1.4 + 2.0 / (static_cast<double>(n) + 1.0)) * expected_norm(n) *
                                 std::sqrt(gamma_sigma_new);
        return p_sigma_norm < threshold;
    }

    PcUpdate update_p_c_and_h(const Vector &p_c, double p_sigma_norm, double gamma_sigma_new,
                              const DistributionState &old_state, const Vector &m_new,
                              const StrategyParams &params)
    {
        PcUpdate out;
        out.h_sigma = heaviside_sigma(p_sigma_norm, gamma_sigma_new, old_state.dimension());
        const double cc = params.c_c;
        out.p_c = (1.0 - cc) * p_c;
        if (out.h_sigma)
            out.p_c += std::sqrt(cc * (2.0 - cc) * params.mu_w) * (m_new - old_state.mean) / old_state.sigma;
        return out;
    }

    Gammas update_gammas(double gamma_sigma, double gamma_c, const StrategyParams &params, bool h_sigma)
    {
        const double cs = params.c_sigma;
        const double cc = params.c_c;
        Gammas g;
        g.sigma = (1.0 - cs) * (1.0 - cs) * gamma_sigma + cs * (2.0 - cs);
        g.c = (1.0 - cc) * (1.0 - cc) * gamma_c + (h_sigma ? cc * (2.0 - cc) : 0.0);
        return g;
    }

    double eigen_floor(const Matrix &C)
    {
        return 1e-14 * C.trace() / static_cast<double>(C.rows());
    }

    Matrix repair_covariance(const Matrix &C, bool &repaired)
    {
        Matrix sym = 0.5 * (C + C.transpose());
        repaired = false;
        if (!sym.allFinite())
            return sym;

        const double floor = eigen_floor(sym);
        Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
        if (solver.info() != Eigen::Success)
            return sym;
        if (solver.eigenvalues().minCoeff() > floor)
            return sym;

        repaired = true;
        Vector ev = solver.eigenvalues().cwiseMax(floor);
        Matrix fixed = solver.eigenvectors() * ev.asDiagonal() * solver.eigenvectors().transpose();
        return 0.5 * (fixed + fixed.transpose());
    }

    CovarianceUpdate update_covariance(const DistributionState &old_state, const Vector &p_c_new, double gamma_c_new,
                                       const Matrix &ranked, const StrategyParams &params)
    {
        const Matrix &C = old_state.cov;
        const auto n = C.rows();

        Matrix rank_mu = Matrix::Zero(n, n);
        double wsum = 0.0;
        for (std::size_t i = 0; i < params.mu; ++i)
        {
            const Vector y = (ranked.col(static_cast<Eigen::Index>(i)) - old_state.mean) / old_state.sigma;
            rank_mu.noalias() += params.weights[i] * (y * y.transpose());
            wsum += params.weights[i];
        }
        rank_mu -= wsum * C;

        Matrix next = C + params.c_1 * (p_c_new * p_c_new.transpose() - gamma_c_new * C) + params.c_mu * rank_mu;

        CovarianceUpdate out;
        out.cov = repair_covariance(next, out.repaired);
        return out;
    }

    GenerationUpdate cma_update(const DistributionState &old_state, const EvolutionPaths &paths,
                                const StrategyParams &params, const Matrix &ranked)
    {
        const std::size_t n = old_state.dimension();
        GenerationUpdate out;

        const Vector m_new = update_mean(old_state.mean, ranked, params);

        out.paths.p_sigma = update_p_sigma(paths.p_sigma, old_state, m_new, params);
        out.p_sigma_norm = out.paths.p_sigma.norm();

        // gamma_sigma^(g+1) is needed by both h_sigma and the CSA rule.
        const double gamma_sigma_new = update_gammas(paths.gamma_sigma, paths.gamma_c, params, true).sigma;
        PcUpdate pc = update_p_c_and_h(paths.p_c, out.p_sigma_norm, gamma_sigma_new, old_state, m_new, params);
        const Gammas gammas = update_gammas(paths.gamma_sigma, paths.gamma_c, params, pc.h_sigma);

        out.paths.p_c = std::move(pc.p_c);
        out.paths.gamma_sigma = gammas.sigma;
        out.paths.gamma_c = gammas.c;
        out.h_sigma = pc.h_sigma;

        CovarianceUpdate cu = update_covariance(old_state, out.paths.p_c, gammas.c, ranked, params);
        out.repaired = cu.repaired;

        out.state.mean = m_new;
        out.state.cov = std::move(cu.cov);
        out.state.sigma = update_sigma_csa(old_state.sigma, out.p_sigma_norm, gammas.sigma, params, n);
        out.state.generation = old_state.generation + 1;
        out.state.refresh_eigen();
        return out;
    }
}

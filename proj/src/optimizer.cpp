#include "psaes/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace psaes
{
    std::size_t forced_lambda_schedule(std::size_t g, LambdaSchedule direction, std::size_t lambda0, std::size_t lo,
                                       std::size_t hi)
    {
        double total = 0.0;
        for (std::size_t k = 1; k <= g; ++k)
            total += static_cast<double>(k) * static_cast<double>(k + 1) / 2.0;

        const double l0 = static_cast<double>(lambda0);
        double v = l0;
        if (direction == LambdaSchedule::ForcedIncreasing)
            v = l0 + total;
        else if (direction == LambdaSchedule::ForcedDecreasing)
            v = l0 - total;
        v = std::clamp(v, static_cast<double>(lo), static_cast<double>(hi));
        return static_cast<std::size_t>(v);
    }

    Optimizer::Optimizer(const RunConfig &config, ObjectiveFunction objective)
        : config_(config), objective_(std::move(objective)), best_f_(std::numeric_limits<double>::infinity())
    {
        config_.validate();
        if (objective_.dimension != config_.dim)
            throw InvalidArgument("objective dimension does not match config dim");

        rng::Engine init = rng::make_engine(config_.seed, 0, rng::Stream::Init);
        const InitialPoint p0 = init_state(objective_, init);
        sigma0_ = p0.sigma0;
        state_ = DistributionState::initial(p0.m0, p0.sigma0);
        paths_ = EvolutionPaths::zeros(config_.dim);
        psa_ = PsaState::initial(config_.dim);
        start_ = std::chrono::steady_clock::now();
    }

    bool Optimizer::done() const
    {
        if (budget_hit_)
            return true;
        if (state_.generation >= config_.effective_max_gens())
            return true;
        return best_f_ - objective_.optimum_value <= config_.tol;
    }

    double Optimizer::evaluate(const Vector &x) const
    {
        double v = 0.0;
        try
        {
            v = objective_.evaluate(x);
        }
        catch (const std::exception &e)
        {
            throw ObjectiveFailure(objective_.name + " threw: " + e.what());
        }
        if (!std::isfinite(v))
            throw ObjectiveFailure(objective_.name + " returned a non-finite value");
        return v;
    }

    double Optimizer::mu_proxy(const Vector &m) const
    {
        if (config_.mu_proxy == MuProxyMode::FOfMean)
            return evaluate(m);
        return m.mean();
    }

    TraceRow Optimizer::step()
    {
        const std::size_t n = config_.dim;
        const bool psa_on = config_.algorithm != Algorithm::CmaEs;
        const std::size_t lambda_old = psa_.lambda_r;
        const StrategyParams params = derive_params(lambda_old, n);

        rng::Engine eng = rng::make_engine(config_.seed, state_.generation, rng::Stream::Sampling);
        const Matrix x = sample_population(state_, lambda_old, eng);

        std::vector<double> fit(lambda_old);
        for (std::size_t k = 0; k < lambda_old; ++k)
            fit[k] = evaluate(x.col(static_cast<Eigen::Index>(k)));
        fevals_ += lambda_old;

        const std::vector<std::size_t> order = rank_order(fit);
        const Matrix ranked = select_ranked(x, order);
        const double gen_best = fit[order.front()];
        best_f_ = std::min(best_f_, gen_best);

        GenerationUpdate upd = cma_update(state_, paths_, params, ranked);
        if (config_.clamp)
        {
            upd.state.mean = upd.state.mean.cwiseMax(objective_.domain_lo).cwiseMin(objective_.domain_hi);
        }
        if (upd.repaired)
            ++repairs_;

        // population size for the next generation
        PsaState psa_next = psa_;
        if (psa_on)
        {
            switch (config_.schedule)
            {
            case LambdaSchedule::Adaptive: {
                const ParamDelta delta = compute_delta_theta(state_, upd.state);
                const Vector step = fisher_sqrt_apply(delta, state_, config_.fisher);
                const double est = estimate_expected_sqnorm(state_, paths_, params, config_.seed, config_.mc_samples);
                psa_next.p_theta = update_p_theta(psa_, step, est);
                psa_next.gamma_theta = advance_gamma_theta(psa_.gamma_theta, psa_.beta);
                const LambdaUpdate lu = update_lambda(psa_next);
                psa_next.lambda_real = lu.lambda_real;
                psa_next.lambda_r = lu.lambda_r;
                break;
            }
            case LambdaSchedule::ForcedIncreasing:
            case LambdaSchedule::ForcedDecreasing:
                psa_next.lambda_r = forced_lambda_schedule(state_.generation + 1, config_.schedule,
                                                           psa_.lambda_min, psa_.lambda_min, psa_.lambda_max);
                psa_next.lambda_real = static_cast<double>(psa_next.lambda_r);
                break;
            case LambdaSchedule::Frozen:
                break;
            }
        }

        // step-size correction
        const double sigma_pre = upd.state.sigma;
        CorrectionResult corr;
        corr.sigma = sigma_pre;
        int branch = -1;
        const bool corrects = config_.algorithm == Algorithm::PsaGeneral ||
                              config_.algorithm == Algorithm::PsaReformulated ||
                              config_.algorithm == Algorithm::PsaScaled;
        if (corrects)
        {
            const StrategyParams params_new = derive_params(psa_next.lambda_r, n);
            RhoInputs in_old{lambda_old, params.weights, params.mu_w, n, mu_proxy(state_.mean), state_.sigma,
                             config_.sigma_scale};
            RhoInputs in_new{psa_next.lambda_r, params_new.weights, params_new.mu_w, n, mu_proxy(upd.state.mean),
                             sigma_pre, config_.sigma_scale};
            const auto rho_old = rho(in_old);
            const auto rho_new = rho(in_new);

            if (config_.algorithm == Algorithm::PsaGeneral)
                corr = correct_general(sigma_pre, rho_new, rho_old);
            else if (config_.algorithm == Algorithm::PsaScaled)
                corr = correct_scaled(sigma_pre, rho_new, rho_old, config_.kappa);
            else
                corr = correct_reformulated(sigma_pre, rho_new, rho_old, upd.p_sigma_norm, expected_norm(n),
                                            psa_next.lambda_r, lambda_old, config_.correction());
            branch = static_cast<int>(corr.branch);
            if (corr.guard_tripped)
                ++guard_trips_;
        }
        if (!(corr.sigma > 0.0) || !std::isfinite(corr.sigma))
            throw StateCorruption("step-size left (0, inf): " + std::to_string(corr.sigma) + " at generation " +
                                  std::to_string(state_.generation + 1));
        upd.state.sigma = corr.sigma;

        state_ = std::move(upd.state);
        paths_ = std::move(upd.paths);
        psa_ = std::move(psa_next);

        TraceRow row;
        row.run_id = config_.effective_run_id();
        row.g = state_.generation;
        row.lambda_real = psa_on ? psa_.lambda_real : static_cast<double>(psa_.lambda_r);
        row.lambda_r = psa_.lambda_r;
        row.sigma_pre_correction = sigma_pre;
        row.sigma_post_correction = state_.sigma;
        row.correction_branch = branch;
        row.p_sigma_norm = upd.p_sigma_norm;
        row.f_best = gen_best;
        row.f_of_mean = evaluate(state_.mean);
        row.mean = state_.mean;
        row.fevals_cumulative = fevals_;
        row.wall_micros =
            std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start_).count();
        row.guard_tripped = corr.guard_tripped;
        row.repaired = upd.repaired;
        row.lambda_used = lambda_old;

        check_invariants(params, row);

        if (config_.time_budget > 0.0 && static_cast<double>(row.wall_micros) * 1e-6 >= config_.time_budget)
            budget_hit_ = true;
        return row;
    }

    void Optimizer::check_invariants(const StrategyParams &params, const TraceRow &row)
    {
        InvariantReport &r = invariants_;
        ++r.generations_checked;
        auto note = [&](std::size_t &counter, const std::string &what) {
            ++counter;
            if (r.messages.size() < 16)
                r.messages.push_back("g=" + std::to_string(row.g) + ": " + what);
        };

        const Matrix &C = state_.cov;
        if (!(C - C.transpose()).isZero(0.0))
            note(r.asymmetric_c, "C not symmetric");
        const double floor = eigen_floor(C);
        if (!(state_.eigen.min_eigenvalue > 0.0) || state_.eigen.min_eigenvalue < floor * (1.0 - 1e-9))
            note(r.c_below_floor, "min eigenvalue " + std::to_string(state_.eigen.min_eigenvalue) + " below floor");
        if (!(state_.sigma > 0.0))
            note(r.sigma_nonpositive, "sigma <= 0");

        double wsum = 0.0;
        for (double w : params.weights)
            wsum += w;
        if (std::abs(wsum - 1.0) > 1e-12)
            note(r.weights_not_normalized, "sum of weights " + std::to_string(wsum));

        if (psa_.lambda_r < psa_.lambda_min || psa_.lambda_r > psa_.lambda_max)
            note(r.lambda_out_of_bounds, "lambda_r " + std::to_string(psa_.lambda_r) + " out of bounds");

        for (double gm : {paths_.gamma_sigma, paths_.gamma_c, psa_.gamma_theta})
            if (!(gm >= 0.0 && gm <= 1.0 + 1e-15))
                note(r.gamma_out_of_range, "normalization factor " + std::to_string(gm) + " outside [0,1]");

        const int b = row.correction_branch;
        bool branch_ok = true;
        switch (config_.algorithm)
        {
        case Algorithm::PsaReformulated:
            branch_ok = (b >= 0 && b <= 2) && ((b == 0) == (row.p_sigma_norm >= expected_norm(config_.dim)));
            break;
        case Algorithm::PsaGeneral:
        case Algorithm::PsaScaled:
            branch_ok = b == 3;
            break;
        default:
            branch_ok = b == -1;
        }
        if (!branch_ok)
            note(r.branch_mismatch, "branch code " + std::to_string(b) + " inconsistent with state");
    }
}

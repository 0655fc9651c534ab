#include "gigo/optimizers.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace gigo {

namespace {

struct Batch {
    Population pop;
    VectorXd fitness;
    RankedWeights weights;
    double best;
};

Batch sample_batch(const GaussianState& gaussian, const ObjectiveFn& objective,
                   const OptimizerConfig& cfg, RandomStream& rng) {
    Batch batch;
    batch.pop = sample_population(gaussian, cfg.sample_size, rng);
    batch.fitness.resize(cfg.sample_size);
    for (int i = 0; i < cfg.sample_size; ++i)
        batch.fitness(i) = objective(batch.pop.x.col(i));
    batch.weights = compute_rank_weights(batch.fitness, cfg.weights);
    batch.best = batch.fitness.minCoeff();
    return batch;
}

OptimizerState advanced(const OptimizerState& state, GaussianState gaussian, double batch_best,
                        int sample_size) {
    OptimizerState next{std::move(gaussian), state.evaluation_count + sample_size,
                        std::min(state.best_fitness, batch_best), state.step_index + 1};
    return next;
}

// z_i = A^-1 (x_i - mu), recomputed from the x so that updates depend on the
// samples, not on the square root that produced them.
MatrixXd whiten(const GaussianState& gaussian, const MatrixXd& samples_x) {
    MatrixXd centered = samples_x;
    centered.colwise() -= gaussian.mu();
    return gaussian.cov_root().partialPivLu().solve(centered);
}

double spherical_sigma_of(const GaussianState& gaussian) {
    const MatrixXd& a = gaussian.cov_root();
    const double sigma = a(0, 0);
    if (!(sigma > 0.0) ||
        !a.isApprox(sigma * MatrixXd::Identity(a.rows(), a.cols()), 1e-12))
        throw InputError("spherical variant requires a covariance root sigma * I");
    return sigma;
}

VectorXd diagonal_root_of(const GaussianState& gaussian) {
    const MatrixXd& a = gaussian.cov_root();
    const VectorXd diag = a.diagonal();
    if (!a.isApprox(MatrixXd(diag.asDiagonal()), 1e-12))
        throw InputError("separable variant requires a diagonal covariance root");
    return diag;
}

}  // namespace

std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::gigo_sigma: return "gigo_sigma";
        case Algorithm::gigo_a: return "gigo_a";
        case Algorithm::gigo_exact: return "gigo_exact";
        case Algorithm::gigo_spherical: return "gigo_spherical";
        case Algorithm::gigo_separable: return "gigo_separable";
        case Algorithm::xnes: return "xnes";
        case Algorithm::cma_pure_rank_mu: return "cma";
        case Algorithm::blockwise_gigo: return "blockwise_gigo";
    }
    throw InputError("unknown algorithm");
}

Algorithm algorithm_from_name(const std::string& name) {
    for (Algorithm a :
         {Algorithm::gigo_sigma, Algorithm::gigo_a, Algorithm::gigo_exact,
          Algorithm::gigo_spherical, Algorithm::gigo_separable, Algorithm::xnes,
          Algorithm::cma_pure_rank_mu, Algorithm::blockwise_gigo}) {
        if (algorithm_name(a) == name) return a;
    }
    if (name == "cma_pure_rank_mu") return Algorithm::cma_pure_rank_mu;
    throw InputError("unknown algorithm name: " + name);
}

OptimizerState gigo_step(const OptimizerState& state, const ObjectiveFn& objective,
                         const OptimizerConfig& cfg, RandomStream& rng) {
    const Batch batch = sample_batch(state.gaussian, objective, cfg, rng);
    try {
        switch (cfg.algorithm) {
            case Algorithm::gigo_sigma:
            case Algorithm::gigo_a:
            case Algorithm::gigo_exact: {
                const TangentVector speed =
                    igo_speed_full(state.gaussian, batch.pop.x, batch.weights);
                GaussianState moved =
                    cfg.algorithm == Algorithm::gigo_sigma
                        ? gigo_sigma_exp(state.gaussian, speed, cfg.rates, cfg.dt, cfg.euler)
                    : cfg.algorithm == Algorithm::gigo_a
                        ? gigo_a_exp(state.gaussian, speed, cfg.rates, cfg.dt, cfg.euler)
                        : exact_exp(state.gaussian, speed, cfg.rates, cfg.dt);
                return advanced(state, std::move(moved), batch.best, cfg.sample_size);
            }
            case Algorithm::gigo_spherical: {
                const double sigma = spherical_sigma_of(state.gaussian);
                const SphericalGaussianState point(state.gaussian.mu(), sigma);
                const SphericalSpeed speed =
                    igo_speed_spherical(point, batch.pop.x, batch.weights);
                const SphericalGaussianState moved =
                    spherical_exp(point, speed.y_mu, speed.y_sigma, cfg.rates, cfg.dt);
                GaussianState next(moved.mu,
                                   moved.sigma * MatrixXd::Identity(point.dim(), point.dim()));
                return advanced(state, std::move(next), batch.best, cfg.sample_size);
            }
            case Algorithm::gigo_separable: {
                const VectorXd roots = diagonal_root_of(state.gaussian);
                const int d = state.gaussian.dim();
                std::vector<GaussianState> parts;
                std::vector<TangentVector> speeds;
                parts.reserve(d);
                speeds.reserve(d);
                for (int k = 0; k < d; ++k) {
                    const double mu_k = state.gaussian.mu()(k);
                    const double var_k = roots(k) * roots(k);
                    double v_mu = 0.0, v_sigma = 0.0;
                    for (int i = 0; i < cfg.sample_size; ++i) {
                        const double centered = batch.pop.x(k, i) - mu_k;
                        v_mu += batch.weights.w_hat(i) * centered;
                        v_sigma += batch.weights.w_hat(i) * (centered * centered - var_k);
                    }
                    parts.emplace_back(VectorXd::Constant(1, mu_k),
                                       MatrixXd::Constant(1, 1, roots(k)));
                    speeds.push_back(TangentVector{VectorXd::Constant(1, v_mu),
                                                   MatrixXd::Constant(1, 1, v_sigma)});
                }
                const auto moved = separable_exp(parts, speeds, cfg.rates, cfg.dt);
                VectorXd mu(d);
                MatrixXd root = MatrixXd::Zero(d, d);
                for (int k = 0; k < d; ++k) {
                    mu(k) = moved[k].mu()(0);
                    root(k, k) = moved[k].cov_root()(0, 0);
                }
                return advanced(state, GaussianState(mu, root), batch.best, cfg.sample_size);
            }
            default:
                throw InputError("gigo_step: not a GIGO variant");
        }
    } catch (const IntegrationFailure& e) {
        throw IntegrationFailure("step " + std::to_string(state.step_index) + ": " + e.what());
    } catch (const ExpMapFailure& e) {
        throw ExpMapFailure("step " + std::to_string(state.step_index) + ": " + e.what());
    }
}

OptimizerState xnes_step(const OptimizerState& state, const ObjectiveFn& objective,
                         const OptimizerConfig& cfg, RandomStream& rng) {
    const Batch batch = sample_batch(state.gaussian, objective, cfg, rng);
    const MatrixXd z = whiten(state.gaussian, batch.pop.x);
    const int d = state.gaussian.dim();

    VectorXd g_mu = VectorXd::Zero(d);
    MatrixXd g_m = MatrixXd::Zero(d, d);
    for (int i = 0; i < cfg.sample_size; ++i) {
        g_mu += batch.weights.w_hat(i) * z.col(i);
        g_m += batch.weights.w_hat(i) * (z.col(i) * z.col(i).transpose());
    }
    g_m -= batch.weights.w_hat.sum() * MatrixXd::Identity(d, d);
    g_m = 0.5 * (g_m + g_m.transpose()).eval();

    const VectorXd mu =
        state.gaussian.mu() + cfg.dt * cfg.rates.eta_mu * (state.gaussian.cov_root() * g_mu);
    const MatrixXd a =
        state.gaussian.cov_root() * sym_expm(0.5 * cfg.dt * cfg.rates.eta_sigma * g_m);
    return advanced(state, GaussianState(mu, a), batch.best, cfg.sample_size);
}

OptimizerState cma_step(const OptimizerState& state, const ObjectiveFn& objective,
                        const OptimizerConfig& cfg, RandomStream& rng) {
    const Batch batch = sample_batch(state.gaussian, objective, cfg, rng);
    const TangentVector speed = igo_speed_full(state.gaussian, batch.pop.x, batch.weights);

    const VectorXd mu = state.gaussian.mu() + cfg.dt * cfg.rates.eta_mu * speed.v_mu;
    const MatrixXd sigma = state.gaussian.sigma() + cfg.dt * cfg.rates.eta_sigma * speed.v_sigma;
    Eigen::LLT<MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) throw CmaBreakdown(state.step_index);
    GaussianState next(mu, MatrixXd(llt.matrixL()));
    return advanced(state, std::move(next), batch.best, cfg.sample_size);
}

OptimizerState blockwise_gigo_step(const OptimizerState& state, const ObjectiveFn& objective,
                                   const OptimizerConfig& cfg, RandomStream& rng) {
    const Batch batch = sample_batch(state.gaussian, objective, cfg, rng);
    const MatrixXd z = whiten(state.gaussian, batch.pop.x);
    const int d = state.gaussian.dim();

    VectorXd g_mu = VectorXd::Zero(d);
    MatrixXd g_m = MatrixXd::Zero(d, d);
    for (int i = 0; i < cfg.sample_size; ++i) {
        g_mu += batch.weights.w_hat(i) * z.col(i);
        g_m += batch.weights.w_hat(i) * (z.col(i) * z.col(i).transpose());
    }
    g_m -= batch.weights.w_hat.sum() * MatrixXd::Identity(d, d);
    g_m = 0.5 * (g_m + g_m.transpose()).eval();

    // Mean block: Euclidean geodesic. Covariance block: fixed-mean geodesic
    // Sigma <- A exp(dt_sigma M) A^T, refactored by Cholesky.
    const VectorXd mu = state.gaussian.mu() + cfg.dt_mu * (state.gaussian.cov_root() * g_mu);
    const MatrixXd sigma = state.gaussian.cov_root() * sym_expm(cfg.dt_sigma * g_m) *
                           state.gaussian.cov_root().transpose();
    return advanced(state, GaussianState::from_sigma(mu, 0.5 * (sigma + sigma.transpose())),
                    batch.best, cfg.sample_size);
}

OptimizerState optimizer_step(const OptimizerState& state, const ObjectiveFn& objective,
                              const OptimizerConfig& cfg, RandomStream& rng) {
    switch (cfg.algorithm) {
        case Algorithm::xnes: return xnes_step(state, objective, cfg, rng);
        case Algorithm::cma_pure_rank_mu: return cma_step(state, objective, cfg, rng);
        case Algorithm::blockwise_gigo: return blockwise_gigo_step(state, objective, cfg, rng);
        default: return gigo_step(state, objective, cfg, rng);
    }
}

std::string run_outcome_name(RunOutcome outcome) {
    switch (outcome) {
        case RunOutcome::target_reached: return "target_reached";
        case RunOutcome::max_evaluations: return "max_evaluations";
        case RunOutcome::premature_convergence: return "premature_convergence";
        case RunOutcome::step_failure: return "step_failure";
    }
    return "unknown";
}

bool identical(const RunRecord& a, const RunRecord& b) {
    if (a.evaluations != b.evaluations || a.success != b.success || a.outcome != b.outcome ||
        a.failure_detail != b.failure_detail)
        return false;
    if (a.best_fitness_history != b.best_fitness_history) return false;
    if (a.mu_trace.size() != b.mu_trace.size() || a.sigma_trace.size() != b.sigma_trace.size())
        return false;
    for (std::size_t i = 0; i < a.mu_trace.size(); ++i)
        if (a.mu_trace[i] != b.mu_trace[i]) return false;
    for (std::size_t i = 0; i < a.sigma_trace.size(); ++i)
        if (a.sigma_trace[i] != b.sigma_trace[i]) return false;
    return true;
}

RunRecord run(const OptimizerConfig& cfg, const ObjectiveFn& objective, const Termination& term,
              std::uint64_t seed, const GaussianState& initial, bool record_trajectory) {
    cfg.validate();
    RandomStream rng(seed);
    OptimizerState state{initial};
    RunRecord record;
    if (record_trajectory) {
        record.mu_trace.push_back(state.gaussian.mu());
        record.sigma_trace.push_back(state.gaussian.sigma());
    }

    while (true) {
        OptimizerState next{state.gaussian};
        try {
            next = optimizer_step(state, objective, cfg, rng);
        } catch (const DegenerateStateError& e) {
            // The search distribution collapsed to numerical singularity
            // before the trace floor could fire; same premature-convergence
            // physics, reported under the same reason.
            record.outcome = RunOutcome::premature_convergence;
            record.failure_detail = e.what();
            break;
        } catch (const IntegrationFailure& e) {
            record.outcome = RunOutcome::premature_convergence;
            record.failure_detail = e.what();
            break;
        } catch (const std::exception& e) {
            record.outcome = RunOutcome::step_failure;
            record.failure_detail = e.what();
            break;
        }
        state = next;
        record.evaluations = state.evaluation_count;
        record.best_fitness_history.push_back(state.best_fitness);
        if (record_trajectory) {
            record.mu_trace.push_back(state.gaussian.mu());
            record.sigma_trace.push_back(state.gaussian.sigma());
        }
        if (state.best_fitness <= term.target_fitness) {
            record.success = true;
            record.outcome = RunOutcome::target_reached;
            break;
        }
        if (state.gaussian.sigma().trace() < term.stagnation_floor) {
            record.outcome = RunOutcome::premature_convergence;
            break;
        }
        if (state.evaluation_count >= term.max_evaluations) {
            record.outcome = RunOutcome::max_evaluations;
            break;
        }
    }
    return record;
}

}  // namespace gigo

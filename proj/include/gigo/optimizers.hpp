#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "gigo/geodesics.hpp"
#include "gigo/igo.hpp"
#include "gigo/manifold.hpp"

namespace gigo {

enum class Algorithm {
    gigo_sigma,
    gigo_a,
    gigo_exact,
    gigo_spherical,
    gigo_separable,
    xnes,
    cma_pure_rank_mu,
    blockwise_gigo,
};

std::string algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

/// One optimizer setup. Only the products dt * eta_mu and dt * eta_sigma
/// enter the updates; the benchmark defaults fix dt = 1 and vary the rates.
struct OptimizerConfig {
    Algorithm algorithm = Algorithm::gigo_a;
    int sample_size = 10;
    LearningRates rates;
    double dt = 1.0;
    SelectionScheme weights = SelectionScheme::truncation(1.0, 0.5);
    EulerConfig euler;      // GIGO Euler variants only
    double dt_mu = 1.0;     // blockwise_gigo only
    double dt_sigma = 1.0;  // blockwise_gigo only

    void validate() const {
        if (sample_size < 2) throw InputError("OptimizerConfig: sample size must be >= 2");
        if (!(dt > 0.0)) throw InputError("OptimizerConfig: dt must be > 0");
        euler.validate();
    }
};

/// Search state carried between steps. The spherical and separable variants
/// keep their covariance inside the same storage (sigma * I and diagonal A
/// respectively), so evaluation_count = step_index * sample_size always
/// holds regardless of the variant.
struct OptimizerState {
    GaussianState gaussian;
    long evaluation_count = 0;
    double best_fitness = std::numeric_limits<double>::infinity();
    int step_index = 0;
};

using ObjectiveFn = std::function<double(const VectorXd&)>;

OptimizerState gigo_step(const OptimizerState& state, const ObjectiveFn& objective,
                         const OptimizerConfig& cfg, RandomStream& rng);
OptimizerState xnes_step(const OptimizerState& state, const ObjectiveFn& objective,
                         const OptimizerConfig& cfg, RandomStream& rng);
OptimizerState cma_step(const OptimizerState& state, const ObjectiveFn& objective,
                        const OptimizerConfig& cfg, RandomStream& rng);
OptimizerState blockwise_gigo_step(const OptimizerState& state, const ObjectiveFn& objective,
                                   const OptimizerConfig& cfg, RandomStream& rng);

/// Dispatch on cfg.algorithm.
OptimizerState optimizer_step(const OptimizerState& state, const ObjectiveFn& objective,
                              const OptimizerConfig& cfg, RandomStream& rng);

struct Termination {
    double target_fitness = 1e-8;
    long max_evaluations = 1000000;
    double stagnation_floor = 1e-30;  // on trace(Sigma)
};

enum class RunOutcome {
    target_reached,
    max_evaluations,
    premature_convergence,
    step_failure,
};

std::string run_outcome_name(RunOutcome outcome);

/// Per-run trace. The parameter trajectory is recorded only when asked for;
/// summaries and the best-fitness history are always kept.
struct RunRecord {
    long evaluations = 0;
    bool success = false;
    RunOutcome outcome = RunOutcome::max_evaluations;
    std::string failure_detail;
    std::vector<double> best_fitness_history;  // one entry per step
    std::vector<VectorXd> mu_trace;            // with the initial state first
    std::vector<MatrixXd> sigma_trace;
};

bool identical(const RunRecord& a, const RunRecord& b);

/// Full optimization loop around the shared sampling frame. Deterministic
/// given (config, termination, seed); optimizer-step errors terminate the
/// run as data, not as process failure.
RunRecord run(const OptimizerConfig& cfg, const ObjectiveFn& objective, const Termination& term,
              std::uint64_t seed, const GaussianState& initial, bool record_trajectory = true);

}  // namespace gigo

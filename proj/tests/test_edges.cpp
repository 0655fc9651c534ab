#include <doctest.h>

#include <cmath>

#include "gigo/analysis.hpp"
#include "gigo/bench.hpp"
#include "gigo/geodesics.hpp"
#include "gigo/manifold.hpp"
#include "gigo/optimizers.hpp"

using namespace gigo;

TEST_SUITE_BEGIN("edges");

TEST_CASE("taylor series reports divergence instead of returning garbage") {
    const MatrixXd huge = 1e10 * MatrixXd::Identity(2, 2);
    CHECK_THROWS_AS(taylor_ch_shc(huge, 1.0, 1e-16), NumericError);
}

TEST_CASE("sigma-side Euler integrator exhausts its retry budget") {
    const GaussianState state = GaussianState::standard(1);
    TangentVector speed;
    speed.v_mu = VectorXd::Zero(1);
    speed.v_sigma = MatrixXd::Constant(1, 1, -5.0);  // overshoots the SPD cone
    EulerConfig cfg;
    cfg.steps = 1;
    cfg.reduction_factor = 2.0;
    cfg.max_retries = 0;
    CHECK_THROWS_AS(gigo_sigma_exp(state, speed, LearningRates(1, 1), 1.0, cfg),
                    IntegrationFailure);
    // With retries allowed the same step succeeds.
    cfg.max_retries = 8;
    const GaussianState out = gigo_sigma_exp(state, speed, LearningRates(1, 1), 1.0, cfg);
    CHECK(out.sigma()(0, 0) > 0.0);
}

TEST_CASE("configuration invariants are enforced") {
    OptimizerConfig cfg;
    cfg.sample_size = 1;
    CHECK_THROWS_AS(cfg.validate(), InputError);
    cfg.sample_size = 4;
    cfg.dt = 0.0;
    CHECK_THROWS_AS(cfg.validate(), InputError);

    EulerConfig euler;
    euler.reduction_factor = 1.0;
    CHECK_THROWS_AS(euler.validate(), InputError);

    CHECK_THROWS_AS(LearningRates(0.0, 1.0), InputError);
    CHECK_THROWS_AS(SphericalGaussianState(VectorXd::Zero(2), 0.0), std::domain_error);
    CHECK_THROWS_AS(SphericalGaussianState(VectorXd::Zero(2), -1.0), std::domain_error);
}

TEST_CASE("fisher_metric_general rejects singular covariance charts") {
    const GaussianChart chart = [](const VectorXd& theta) {
        GaussianMoments g;
        g.mu = theta;
        g.sigma = MatrixXd::Zero(1, 1);
        return g;
    };
    CHECK_THROWS_AS(fisher_metric_general(chart, VectorXd::Zero(1)), std::domain_error);
}

TEST_CASE("sample_population needs a positive count") {
    RandomStream rng(1);
    CHECK_THROWS_AS(sample_population(GaussianState::standard(2), 0, rng), InputError);
}

TEST_CASE("spherical and separable optimizer variants validate their state shape") {
    OptimizerConfig cfg;
    cfg.algorithm = Algorithm::gigo_spherical;
    cfg.sample_size = 4;
    cfg.weights = SelectionScheme::direct(bench::default_weight_vector(4));
    MatrixXd skew(2, 2);
    skew << 1.0, 0.0, 0.5, 1.0;
    RandomStream rng(2);
    OptimizerState state{GaussianState(VectorXd::Zero(2), skew)};
    const auto objective = [](const VectorXd& x) { return x.squaredNorm(); };
    CHECK_THROWS_AS(gigo_step(state, objective, cfg, rng), InputError);
    cfg.algorithm = Algorithm::gigo_separable;
    CHECK_THROWS_AS(gigo_step(state, objective, cfg, rng), InputError);
}

TEST_CASE("linear trajectory at the critical step size keeps sigma flat") {
    const double dt_cr = analysis::critical_dt(analysis::CriticalDtInputs{});
    for (Algorithm algorithm : {Algorithm::gigo_exact, Algorithm::gigo_spherical}) {
        const auto table = bench::run_trajectory_experiment(
            algorithm, bench::neg_first_coord(1), dt_cr, 12, 5);
        REQUIRE(table.size() == 13);
        for (const auto& row : table) {
            CHECK(row.sigma > 0.9);
            CHECK(row.sigma < 1.1);
            CHECK(row.event == "normal");
        }
        // The mean advances roughly linearly while sigma is pinned.
        CHECK(table.back().mu > table.front().mu + 10.0);
    }

    // The sampled per-step sigma ratio tracks the closed-form multiplier.
    const analysis::CriticalDtInputs inputs;
    for (double dt : {0.5, 1.2}) {
        const auto table = bench::run_trajectory_experiment(
            Algorithm::gigo_spherical, bench::neg_first_coord(1), dt, 6, 11);
        const double closed_form = analysis::spherical_linear_step_ratio(dt, inputs);
        for (std::size_t i = 1; i < table.size(); ++i) {
            const double sampled = table[i].sigma / table[i - 1].sigma;
            CHECK(sampled == doctest::Approx(closed_form).epsilon(0.05));
        }
    }
}

TEST_SUITE_END();

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "gigo/manifold.hpp"
#include "oracles.hpp"

using namespace gigo;

TEST_SUITE_BEGIN("manifold");

TEST_CASE("fisher_metric_1d matches the diagonal closed form") {
    MatrixXd m = fisher_metric_1d(0.0, 1.0);
    CHECK(m(0, 0) == doctest::Approx(1.0));
    CHECK(m(1, 1) == doctest::Approx(2.0));
    CHECK(m(0, 1) == 0.0);

    m = fisher_metric_1d(5.0, 2.0);
    CHECK(m(0, 0) == doctest::Approx(0.25));
    CHECK(m(1, 1) == doctest::Approx(0.5));

    CHECK_THROWS_AS(fisher_metric_1d(0.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(fisher_metric_1d(0.0, -1.0), std::domain_error);
}

TEST_CASE("fisher_metric_general agrees with the 1-D closed forms") {
    const GaussianChart mu_sigma = [](const VectorXd& theta) {
        GaussianMoments g;
        g.mu = theta.head(1);
        g.sigma = MatrixXd::Constant(1, 1, theta(1) * theta(1));
        return g;
    };
    VectorXd theta(2);
    theta << 0.0, 1.0;
    const MatrixXd m = fisher_metric_general(mu_sigma, theta);
    CHECK(m(0, 0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(m(1, 1) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(std::abs(m(0, 1)) < 1e-8);

    // (mu, c = sigma^2) chart: dc = 2 sigma dsigma turns diag(1,2) into diag(1, 1/2).
    const GaussianChart mu_var = [](const VectorXd& theta_c) {
        GaussianMoments g;
        g.mu = theta_c.head(1);
        g.sigma = MatrixXd::Constant(1, 1, theta_c(1));
        return g;
    };
    VectorXd theta_c(2);
    theta_c << 0.0, 1.0;
    const MatrixXd mc = fisher_metric_general(mu_var, theta_c);
    CHECK(mc(0, 0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(mc(1, 1) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("fisher_metric_general: pure mean chart gives the identity block") {
    const GaussianChart chart = [](const VectorXd& theta) {
        GaussianMoments g;
        g.mu = theta;
        g.sigma = MatrixXd::Identity(2, 2);
        return g;
    };
    VectorXd theta(2);
    theta << 0.3, -0.7;
    const MatrixXd m = fisher_metric_general(chart, theta);
    CHECK((m - MatrixXd::Identity(2, 2)).norm() < 1e-7);
}

TEST_CASE("fisher_metric_general is symmetric PSD on random charts") {
    RandomStream rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        // Chart theta in R^3 -> N(mu(theta), Sigma(theta)) in dimension 2.
        const double a = rng.normal(), b = rng.normal();
        const GaussianChart chart = [a, b](const VectorXd& theta) {
            GaussianMoments g;
            g.mu = VectorXd(2);
            g.mu << theta(0) + a * theta(2), theta(1) * theta(1);
            MatrixXd s(2, 2);
            const double scale = 1.0 + 0.5 * std::tanh(theta(2) + b);
            s << scale, 0.2 * theta(0), 0.2 * theta(0), 1.5 * scale;
            g.sigma = s * s.transpose();
            return g;
        };
        VectorXd theta = rng.normal_vector(3);
        const MatrixXd m = fisher_metric_general(chart, theta);
        CHECK((m - m.transpose()).norm() < 1e-12);
        Eigen::SelfAdjointEigenSolver<MatrixXd> eig(m);
        CHECK(eig.eigenvalues().minCoeff() > -1e-10);
    }
}

TEST_CASE("natural gradient is chart invariant between (mu,sigma) and (mu,sigma^2)") {
    // F expressed in both charts; finite-difference gradients transported
    // through the chart Jacobian must agree.
    const auto f1 = [](double mu, double sigma) { return std::sin(mu) + sigma * sigma + mu * sigma; };
    const auto f2 = [&](double mu, double c) { return f1(mu, std::sqrt(c)); };

    const GaussianChart chart1 = [](const VectorXd& t) {
        GaussianMoments g;
        g.mu = t.head(1);
        g.sigma = MatrixXd::Constant(1, 1, t(1) * t(1));
        return g;
    };
    const GaussianChart chart2 = [](const VectorXd& t) {
        GaussianMoments g;
        g.mu = t.head(1);
        g.sigma = MatrixXd::Constant(1, 1, t(1));
        return g;
    };

    RandomStream rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        const double mu = rng.normal();
        const double sigma = 0.7 + rng.uniform();
        const double c = sigma * sigma;
        const double h = 1e-6;

        VectorXd grad1(2), grad2(2);
        grad1 << (f1(mu + h, sigma) - f1(mu - h, sigma)) / (2 * h),
            (f1(mu, sigma + h) - f1(mu, sigma - h)) / (2 * h);
        grad2 << (f2(mu + h, c) - f2(mu - h, c)) / (2 * h),
            (f2(mu, c + h) - f2(mu, c - h)) / (2 * h);

        VectorXd t1(2), t2(2);
        t1 << mu, sigma;
        t2 << mu, c;
        const VectorXd nat1 = fisher_metric_general(chart1, t1).ldlt().solve(grad1);
        const VectorXd nat2 = fisher_metric_general(chart2, t2).ldlt().solve(grad2);

        MatrixXd jac(2, 2);  // d(mu, c)/d(mu, sigma)
        jac << 1, 0, 0, 2 * sigma;
        const VectorXd transported = jac * nat1;
        CHECK(oracle::rel_diff(transported, nat2) < 1e-6);
    }
}

TEST_CASE("twist_metric scales the two blocks") {
    MatrixXd m = MatrixXd::Zero(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = 2.0;

    const MatrixXd identity_twist = twist_metric(m, 1, LearningRates(1.0, 1.0));
    CHECK((identity_twist - m).norm() == 0.0);

    const MatrixXd twisted = twist_metric(m, 1, LearningRates(2.0, 0.5));
    CHECK(twisted(0, 0) == doctest::Approx(0.5));
    CHECK(twisted(1, 1) == doctest::Approx(4.0));

    MatrixXd m2 = MatrixXd::Zero(2, 2);
    m2(0, 0) = 0.25;
    m2(1, 1) = 0.5;
    const MatrixXd twisted2 = twist_metric(m2, 1, LearningRates(1.0, 1.8));
    CHECK(twisted2(0, 0) == doctest::Approx(0.25));
    CHECK(twisted2(1, 1) == doctest::Approx(0.5 / 1.8));
}

TEST_CASE("sample_population applies the affine map and is seed deterministic") {
    const int d = 2, n = 4;
    RandomStream rng_a(42), rng_b(42);
    const GaussianState standard = GaussianState::standard(d);
    const Population pop_a = sample_population(standard, n, rng_a);
    CHECK((pop_a.x - pop_a.z).norm() == 0.0);  // A = I, mu = 0

    const Population pop_b = sample_population(standard, n, rng_b);
    CHECK((pop_a.z - pop_b.z).norm() == 0.0);  // bit-identical under equal seeds
    CHECK((pop_a.x - pop_b.x).norm() == 0.0);

    RandomStream rng_c(42);
    const GaussianState shifted(VectorXd::Constant(d, 10.0), 2.0 * MatrixXd::Identity(d, d));
    const Population pop_c = sample_population(shifted, n, rng_c);
    MatrixXd expected = 2.0 * pop_c.z;
    expected.colwise() += VectorXd::Constant(d, 10.0);
    CHECK((pop_c.x - expected).norm() < 1e-15);
}

TEST_CASE("degenerate covariance roots are rejected") {
    MatrixXd a(2, 2);
    a << 1.0, 0.0, 1.0, 1e-14;
    CHECK_THROWS_AS(GaussianState(VectorXd::Zero(2), a), DegenerateStateError);

    MatrixXd not_spd(2, 2);
    not_spd << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(GaussianState::from_sigma(VectorXd::Zero(2), not_spd),
                    DegenerateStateError);
}

TEST_SUITE_END();

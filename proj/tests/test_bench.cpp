#include <doctest.h>

#include <cmath>

#include "gigo/analysis.hpp"
#include "gigo/bench.hpp"

using namespace gigo;
using namespace gigo::bench;

TEST_SUITE_BEGIN("bench");

TEST_CASE("objective closed forms") {
    CHECK(sphere(3).eval(VectorXd::Zero(3)) == 0.0);
    CHECK(rosenbrock(4).eval(VectorXd::Ones(4)) == 0.0);
    CHECK(cigar_tablet(3).eval(VectorXd::Zero(3)) == 0.0);
    CHECK(cigar_tablet(3).eval(VectorXd::Ones(3)) == doctest::Approx(1.0 + 1e4 + 1e8));
    VectorXd x(2);
    x << 3.0, 7.0;
    CHECK(neg_first_coord(2).eval(x) == doctest::Approx(-3.0));
    CHECK_THROWS_AS(cigar_tablet(1), InputError);
    CHECK_THROWS_AS(rosenbrock(1), InputError);
}

TEST_CASE("protocol defaults follow the standard natural-gradient settings") {
    CHECK(default_sample_size(2) == 6);
    CHECK(default_sample_size(8) == 10);
    CHECK(default_sample_size(64) == 16);
    CHECK(default_eta_sigma(1) == doctest::Approx(1.8));
    CHECK(default_eta_sigma(8) ==
          doctest::Approx(0.6 * (3.0 + std::log(8.0)) / (8.0 * std::sqrt(8.0))));

    for (int n : {6, 10, 16}) {
        const VectorXd w = default_weight_vector(n);
        CHECK(std::abs(w.sum()) < 1e-12);
        for (int i = 1; i < n; ++i) CHECK(w(i) <= w(i - 1) + 1e-15);
    }
}

TEST_CASE("initial state sits on the radius-10 sphere with identity covariance") {
    for (int d : {2, 8}) {
        const GaussianState state = initial_state(d, 10.0, derive_run_seed(5, 1));
        CHECK(state.mu().norm() == doctest::Approx(10.0).epsilon(1e-12));
        CHECK((state.cov_root() - MatrixXd::Identity(d, d)).norm() == 0.0);
    }
    // Distinct run indices give distinct starting points.
    CHECK((initial_state(3, 10.0, derive_run_seed(5, 1)).mu() -
           initial_state(3, 10.0, derive_run_seed(5, 2)).mu())
              .norm() > 1e-3);
}

TEST_CASE("benchmark cells are reproducible and summarize failures as data") {
    BenchmarkProtocol protocol;
    protocol.runs_per_cell = 4;
    protocol.max_evaluations = 20000;

    const CellSummary first =
        run_benchmark_cell(Algorithm::gigo_a, sphere(2), 2, protocol, 77, 2);
    const CellSummary second =
        run_benchmark_cell(Algorithm::gigo_a, sphere(2), 2, protocol, 77, 1);
    CHECK(first.successes == second.successes);
    CHECK(first.median_evals == second.median_evals);
    CHECK(first.all_premature == second.all_premature);
    REQUIRE(first.records.size() == second.records.size());
    for (std::size_t i = 0; i < first.records.size(); ++i)
        CHECK(identical(first.records[i], second.records[i]));
    for (const RunRecord& record : first.records)
        CHECK((record.success || record.outcome != RunOutcome::target_reached));
}

TEST_CASE("sphere d=2 with paper defaults converges prematurely in most runs") {
    BenchmarkProtocol protocol;
    protocol.runs_per_cell = 8;
    const CellSummary cell =
        run_benchmark_cell(Algorithm::gigo_a, sphere(2), 2, protocol, 2024, 2);
    int premature = 0;
    for (const RunRecord& record : cell.records)
        premature += record.outcome == RunOutcome::premature_convergence ? 1 : 0;
    CHECK(premature >= cell.runs / 2);
}

TEST_CASE("trajectory experiment step behavior") {
    SUBCASE("GIGO at dt=1 decreases sigma on the first step against a positive IGO speed") {
        const auto table = run_trajectory_experiment(Algorithm::gigo_exact, quadratic_1d(),
                                                     1.0, 3, 7);
        REQUIRE(table.size() >= 2);
        CHECK(table[0].sigma == doctest::Approx(1.0));
        CHECK(table[1].sigma < 1.0);
        CHECK(table[1].mu < 10.0);
        CHECK(table[1].mu > 8.0);
        // The sigma component of the IGO speed at the start is positive:
        // the best quarter of N(10,1) samples under x^2 lies one-sided.
        const analysis::AlphaBeta ab = analysis::linear_flow_alpha_beta(0.25, 1);
        CHECK(4.0 * ab.alpha > 0.0);
    }

    SUBCASE("GIGO on the linear function beyond dt_cr converges prematurely") {
        const auto table =
            run_trajectory_experiment(Algorithm::gigo_exact, neg_first_coord(1), 1.0, 60, 7);
        REQUIRE(table.size() >= 40);
        const double early = table[5].sigma;
        const double late = table.back().sigma;
        CHECK(late < 0.05 * early);  // exponential collapse
        const double mu_gap =
            std::abs(table.back().mu - table[table.size() - 10].mu);
        CHECK(mu_gap < 0.2);  // mean converges
    }

    SUBCASE("CMA at dt=1 breaks down within the first steps") {
        const auto table =
            run_trajectory_experiment(Algorithm::cma_pure_rank_mu, quadratic_1d(), 1.0, 50, 7);
        CHECK(table.size() <= 11);
        CHECK(table.back().event == "cma_breakdown");
    }

    SUBCASE("dt=0.01 runs smoothly and nearly identically for all algorithms") {
        const int steps = 120;
        const auto gigo_table =
            run_trajectory_experiment(Algorithm::gigo_exact, quadratic_1d(), 0.01, steps, 7);
        const auto cma_table =
            run_trajectory_experiment(Algorithm::cma_pure_rank_mu, quadratic_1d(), 0.01, steps, 7);
        const auto xnes_table =
            run_trajectory_experiment(Algorithm::xnes, quadratic_1d(), 0.01, steps, 7);
        REQUIRE(gigo_table.size() == steps + 1);
        REQUIRE(cma_table.size() == steps + 1);
        REQUIRE(xnes_table.size() == steps + 1);
        for (const auto& row : cma_table) CHECK(row.event == "normal");
        for (std::size_t i = 0; i < gigo_table.size(); ++i) {
            CHECK(std::abs(gigo_table[i].mu - cma_table[i].mu) < 0.05);
            CHECK(std::abs(gigo_table[i].sigma - cma_table[i].sigma) < 0.05);
            CHECK(std::abs(gigo_table[i].mu - xnes_table[i].mu) < 0.05);
        }
        // Dot cadence: every 100 steps at dt = 0.01.
        CHECK(gigo_table[0].dot);
        CHECK_FALSE(gigo_table[1].dot);
        CHECK(gigo_table[100].dot);
    }

    SUBCASE("at dt=0.5 GIGO starts with the lowest mean, later the highest") {
        // Time is counted in dots (t = step * dt): GIGO is strictly lowest
        // while the first dots land, is already above xNES at t = 2, and is
        // strictly highest of the three from t = 3 on, once its smaller
        // variance has compounded. The GIGO-vs-CMA crossover sits between
        // t = 2 and t = 3 with this sampler.
        int ordered = 0;
        const int seeds = 24;
        for (int seed = 0; seed < seeds; ++seed) {
            const auto gigo_table = run_trajectory_experiment(Algorithm::gigo_exact,
                                                              quadratic_1d(), 0.5, 8, seed);
            const auto cma_table = run_trajectory_experiment(Algorithm::cma_pure_rank_mu,
                                                             quadratic_1d(), 0.5, 8, seed);
            const auto xnes_table =
                run_trajectory_experiment(Algorithm::xnes, quadratic_1d(), 0.5, 8, seed);
            bool good = true;
            for (int step : {1, 2})  // t <= 1: lowest mean is GIGO
                good = good && gigo_table[step].mu < cma_table[step].mu &&
                       gigo_table[step].mu < xnes_table[step].mu;
            good = good && gigo_table[4].mu > xnes_table[4].mu;  // t = 2
            for (int step : {6, 8})  // t >= 3: highest mean is GIGO
                good = good && gigo_table[step].mu > cma_table[step].mu &&
                       gigo_table[step].mu > xnes_table[step].mu;
            ordered += good ? 1 : 0;
        }
        CHECK(ordered >= 20);
    }
}

TEST_SUITE_END();

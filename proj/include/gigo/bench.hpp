#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gigo/optimizers.hpp"

namespace gigo::bench {

/// A deterministic objective together with its name and dimension.
struct Objective {
    std::string name;
    int dimension = 1;
    ObjectiveFn eval;
};

Objective sphere(int d);
Objective cigar_tablet(int d);
Objective rosenbrock(int d);
Objective neg_first_coord(int d);
Objective quadratic_1d();  // x -> x^2, the 1-D trajectory objective
Objective objective_from_name(const std::string& name, int d);

/// Natural logarithm everywhere (sample size, covariance rate, weights).
int default_sample_size(int d);               // floor(4 + 3 log d)
double default_eta_sigma(int d);              // (3/5)(3 + log d)/(d sqrt d)
VectorXd default_weight_vector(int n);        // log-rank weights minus 1/N, sum 0

struct BenchmarkProtocol {
    std::vector<int> dimensions{2, 4, 8, 16, 32, 64};
    int runs_per_cell = 24;
    double target_fitness = 1e-8;
    long max_evaluations = 1000000;
    double stagnation_floor = 1e-30;
    double dt = 1.0;
    double eta_mu = 1.0;
    double init_radius = 10.0;  // initial mean uniform on this sphere
    EulerConfig euler;          // 100 Euler steps per GIGO step

    OptimizerConfig config_for(Algorithm algorithm, int dimension) const;
    Termination termination() const;
};

/// Counter-based per-run seed derivation (splitmix64 over master ^ index),
/// so any run of a cell can be recomputed in isolation.
std::uint64_t derive_run_seed(std::uint64_t master_seed, std::uint64_t run_index);

/// Initial state of a benchmark run: mean uniform on the radius sphere,
/// identity covariance. Drawn from its own derived stream.
GaussianState initial_state(int dimension, double radius, std::uint64_t run_seed);

struct CellSummary {
    std::string algorithm;
    std::string objective;
    int dimension = 0;
    int runs = 0;
    int successes = 0;
    double median_evals = 0.0;  // over successful runs; meaningless when successes = 0
    bool all_premature = false;
    std::vector<RunRecord> records;
};

/// One benchmark cell: `runs_per_cell` independent seeded runs, reported
/// with the success count and the median evaluations-to-target over the
/// successful runs. Failures are data, never process errors.
CellSummary run_benchmark_cell(Algorithm algorithm, const Objective& objective, int dimension,
                               const BenchmarkProtocol& protocol, std::uint64_t master_seed,
                               int jobs = 1);

/// One row of the 1-D trajectory experiment table.
struct TrajectoryRow {
    int step = 0;
    double t = 0.0;
    double mu = 0.0;
    double sigma = 0.0;
    bool dot = false;  // paper cadence: one dot every max(1, round(1/dt)) steps
    std::string event = "normal";
};

/// The trajectory experiment: sample size 5000, weights 4 * 1_{q <= 1/4},
/// eta_mu = 1, eta_sigma = 1.8, start N(10, 1), recording (mu, sigma) each
/// step. A CMA breakdown truncates the table with its event row; premature
/// sigma collapse is marked the same way.
std::vector<TrajectoryRow> run_trajectory_experiment(Algorithm algorithm,
                                                     const Objective& objective, double dt,
                                                     int steps, std::uint64_t master_seed);

}  // namespace gigo::bench

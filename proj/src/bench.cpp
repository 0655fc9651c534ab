#include "gigo/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace gigo::bench {

Objective sphere(int d) {
    if (d < 1) throw InputError("sphere: dimension must be >= 1");
    return {"sphere", d, [](const VectorXd& x) { return x.squaredNorm(); }};
}

Objective cigar_tablet(int d) {
    if (d < 2) throw InputError("cigar_tablet: dimension must be >= 2");
    return {"cigar_tablet", d, [d](const VectorXd& x) {
                if (x.size() != d) throw InputError("cigar_tablet: dimension mismatch");
                double value = x(0) * x(0);
                for (int i = 1; i + 1 < d; ++i) value += 1e4 * x(i) * x(i);
                value += 1e8 * x(d - 1) * x(d - 1);
                return value;
            }};
}

Objective rosenbrock(int d) {
    if (d < 2) throw InputError("rosenbrock: dimension must be >= 2");
    return {"rosenbrock", d, [d](const VectorXd& x) {
                if (x.size() != d) throw InputError("rosenbrock: dimension mismatch");
                double value = 0.0;
                for (int i = 0; i + 1 < d; ++i) {
                    const double gap = x(i) * x(i) - x(i + 1);
                    const double off = x(i) - 1.0;
                    value += 100.0 * gap * gap + off * off;
                }
                return value;
            }};
}

Objective neg_first_coord(int d) {
    if (d < 1) throw InputError("neg_first_coord: dimension must be >= 1");
    return {"linear", d, [](const VectorXd& x) { return -x(0); }};
}

Objective quadratic_1d() {
    return {"quadratic", 1, [](const VectorXd& x) { return x(0) * x(0); }};
}

Objective objective_from_name(const std::string& name, int d) {
    if (name == "sphere") return sphere(d);
    if (name == "cigar_tablet" || name == "cigar-tablet") return cigar_tablet(d);
    if (name == "rosenbrock") return rosenbrock(d);
    if (name == "linear") return neg_first_coord(d);
    if (name == "quadratic") {
        if (d != 1) throw InputError("quadratic objective is one-dimensional");
        return quadratic_1d();
    }
    throw InputError("unknown objective: " + name);
}

int default_sample_size(int d) {
    return static_cast<int>(std::floor(4.0 + 3.0 * std::log(static_cast<double>(d))));
}

double default_eta_sigma(int d) {
    const double dd = static_cast<double>(d);
    return (3.0 / 5.0) * (3.0 + std::log(dd)) / (dd * std::sqrt(dd));
}

VectorXd default_weight_vector(int n) {
    VectorXd raw(n);
    for (int i = 1; i <= n; ++i)
        raw(i - 1) = std::max(0.0, std::log(n / 2.0 + 1.0) - std::log(static_cast<double>(i)));
    return (raw / raw.sum()).array() - 1.0 / n;
}

OptimizerConfig BenchmarkProtocol::config_for(Algorithm algorithm, int dimension) const {
    OptimizerConfig cfg;
    cfg.algorithm = algorithm;
    cfg.sample_size = default_sample_size(dimension);
    cfg.rates = LearningRates(eta_mu, default_eta_sigma(dimension));
    cfg.dt = dt;
    cfg.weights = SelectionScheme::direct(default_weight_vector(cfg.sample_size));
    cfg.euler = euler;
    cfg.dt_mu = eta_mu * dt;
    cfg.dt_sigma = default_eta_sigma(dimension) * dt;
    return cfg;
}

Termination BenchmarkProtocol::termination() const {
    Termination term;
    term.target_fitness = target_fitness;
    term.max_evaluations = max_evaluations;
    term.stagnation_floor = stagnation_floor;
    return term;
}

std::uint64_t derive_run_seed(std::uint64_t master_seed, std::uint64_t run_index) {
    std::uint64_t z = master_seed ^ (run_index * 0x9e3779b97f4a7c15ULL);
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

GaussianState initial_state(int dimension, double radius, std::uint64_t run_seed) {
    RandomStream rng(derive_run_seed(run_seed, 0xa5a5a5a5ULL));
    VectorXd direction = rng.normal_vector(dimension);
    while (direction.norm() < 1e-12) direction = rng.normal_vector(dimension);
    const VectorXd mu = radius * direction / direction.norm();
    return GaussianState(mu, MatrixXd::Identity(dimension, dimension));
}

CellSummary run_benchmark_cell(Algorithm algorithm, const Objective& objective, int dimension,
                               const BenchmarkProtocol& protocol, std::uint64_t master_seed,
                               int jobs) {
    if (objective.dimension != dimension)
        throw InputError("run_benchmark_cell: objective dimension mismatch");
    const OptimizerConfig cfg = protocol.config_for(algorithm, dimension);
    const Termination term = protocol.termination();

    CellSummary cell;
    cell.algorithm = algorithm_name(algorithm);
    cell.objective = objective.name;
    cell.dimension = dimension;
    cell.runs = protocol.runs_per_cell;
    cell.records.resize(protocol.runs_per_cell);

    std::atomic<int> next_run{0};
    auto worker = [&]() {
        while (true) {
            const int index = next_run.fetch_add(1);
            if (index >= protocol.runs_per_cell) return;
            const std::uint64_t seed = derive_run_seed(master_seed, index);
            try {
                const GaussianState start =
                    initial_state(dimension, protocol.init_radius, seed);
                cell.records[index] =
                    run(cfg, objective.eval, term, seed, start, /*record_trajectory=*/false);
            } catch (const std::exception& e) {
                // Never lets an exception cross the thread boundary.
                cell.records[index].success = false;
                cell.records[index].outcome = RunOutcome::step_failure;
                cell.records[index].failure_detail = e.what();
            }
        }
    };
    const int thread_count = std::max(1, std::min(jobs, protocol.runs_per_cell));
    if (thread_count == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(thread_count);
        for (int i = 0; i < thread_count; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::vector<double> successful_evals;
    for (const RunRecord& record : cell.records) {
        if (record.success) {
            ++cell.successes;
            successful_evals.push_back(static_cast<double>(record.evaluations));
        }
    }
    cell.all_premature = cell.successes == 0;
    if (!successful_evals.empty()) {
        std::sort(successful_evals.begin(), successful_evals.end());
        const std::size_t n = successful_evals.size();
        cell.median_evals = n % 2 == 1
                                ? successful_evals[n / 2]
                                : 0.5 * (successful_evals[n / 2 - 1] + successful_evals[n / 2]);
    }
    return cell;
}

std::vector<TrajectoryRow> run_trajectory_experiment(Algorithm algorithm,
                                                     const Objective& objective, double dt,
                                                     int steps, std::uint64_t master_seed) {
    if (objective.dimension != 1)
        throw InputError("run_trajectory_experiment: the experiment is one-dimensional");
    if (!(dt > 0.0)) throw InputError("run_trajectory_experiment: dt must be > 0");
    if (steps < 1) throw InputError("run_trajectory_experiment: steps must be >= 1");

    OptimizerConfig cfg;
    cfg.algorithm = algorithm;
    cfg.sample_size = 5000;
    cfg.rates = LearningRates(1.0, 1.8);
    cfg.dt = dt;
    cfg.weights = SelectionScheme::truncation(4.0, 0.25);
    cfg.dt_mu = cfg.rates.eta_mu * dt;
    cfg.dt_sigma = cfg.rates.eta_sigma * dt;

    const int cadence = std::max(1, static_cast<int>(std::lround(1.0 / dt)));
    constexpr double kSigmaFloor = 1e-30;  // on sigma^2, matching trace(Sigma)

    std::vector<TrajectoryRow> table;
    table.reserve(steps + 1);
    OptimizerState state{GaussianState(VectorXd::Constant(1, 10.0), MatrixXd::Identity(1, 1))};
    RandomStream rng(master_seed);

    auto emit = [&](int step, const std::string& event) {
        TrajectoryRow row;
        row.step = step;
        row.t = step * dt;
        row.mu = state.gaussian.mu()(0);
        row.sigma = std::sqrt(state.gaussian.sigma()(0, 0));
        row.dot = step % cadence == 0;
        row.event = event;
        table.push_back(row);
    };

    emit(0, "normal");
    for (int step = 1; step <= steps; ++step) {
        try {
            state = optimizer_step(state, objective.eval, cfg, rng);
        } catch (const CmaBreakdown&) {
            table.back().event = "cma_breakdown";
            break;
        } catch (const std::exception&) {
            table.back().event = "step_failure";
            break;
        }
        const bool collapsed = state.gaussian.sigma()(0, 0) < kSigmaFloor;
        emit(step, collapsed ? "premature" : "normal");
        if (collapsed) break;
    }
    return table;
}

}  // namespace gigo::bench

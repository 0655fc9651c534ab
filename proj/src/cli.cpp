#include "gigo/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "gigo/analysis.hpp"
#include "gigo/bench.hpp"
#include "gigo/verify.hpp"

namespace gigo::cli {

namespace {

using nlohmann::json;

/// 17 significant digits, enough to reproduce any double exactly.
std::string num(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

struct OutputTarget {
    std::string path;  // empty = stdout

    int write(const std::string& payload, std::ostream& out, std::ostream& err) const {
        if (path.empty()) {
            out << payload;
            return 0;
        }
        std::ofstream file(path, std::ios::binary | std::ios::trunc);
        if (!file) {
            err << "error: cannot open output path: " << path << "\n";
            return 2;
        }
        file << payload;
        if (!file.good()) {
            err << "error: write failed: " << path << "\n";
            return 2;
        }
        return 0;
    }
};

// A JSON config file supplies default values for the active subcommand's
// long flags; explicit flags override it.
std::vector<std::string> apply_config_file(const std::vector<std::string>& args,
                                           std::ostream& err, bool& ok) {
    ok = true;
    std::string config_path;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) {
                err << "error: --config needs a path\n";
                ok = false;
                return args;
            }
            config_path = args[++i];
        } else {
            rest.push_back(args[i]);
        }
    }
    if (config_path.empty()) return rest;

    std::ifstream file(config_path);
    if (!file) {
        err << "error: cannot read config file: " << config_path << "\n";
        ok = false;
        return rest;
    }
    json config;
    try {
        file >> config;
        if (!config.is_object()) throw std::runtime_error("top level must be an object");
    } catch (const std::exception& e) {
        err << "error: invalid JSON config: " << e.what() << "\n";
        ok = false;
        return rest;
    }

    // Insert config pairs right after the subcommand name; explicit flags,
    // parsed later, take precedence.
    std::vector<std::string> merged;
    const std::size_t insert_at = rest.empty() ? 0 : 1;
    merged.insert(merged.end(), rest.begin(), rest.begin() + insert_at);
    for (const auto& [key, value] : config.items()) {
        if (value.is_boolean()) {
            if (value.get<bool>()) merged.push_back("--" + key);
            continue;
        }
        merged.push_back("--" + key);
        merged.push_back(value.is_string() ? value.get<std::string>() : value.dump());
    }
    merged.insert(merged.end(), rest.begin() + insert_at, rest.end());
    return merged;
}

struct BenchArgs {
    std::string objective = "sphere";
    std::vector<int> dims{4};
    std::vector<std::string> algos{"gigo_a"};
    std::uint64_t seed = 1;
    int runs = 24;
    int jobs = 1;
    long max_evals = 1000000;
    std::string out_path;
    std::string format = "csv";
};

struct TrajectoryArgs {
    std::string algo = "gigo_exact";
    std::string function = "quadratic";
    double dt = 1.0;
    int steps = 100;
    std::uint64_t seed = 1;
    std::string out_path;
    std::string format = "csv";
};

struct CriticalArgs {
    double k = 4.0;
    int d = 1;
    double q0 = 0.25;
    double eta_mu = 1.0;
    double eta_sigma = 1.8;
    std::string out_path;
};

struct VerifyArgs {
    std::uint64_t seed = 12345;
    int sweep = 1;
    double tol = 0.0;
};

int cmd_bench(const BenchArgs& args, std::ostream& out, std::ostream& err) {
    bench::BenchmarkProtocol protocol;
    protocol.runs_per_cell = args.runs;
    protocol.max_evaluations = args.max_evals;

    std::vector<bench::CellSummary> cells;
    for (const std::string& algo_name : args.algos) {
        const Algorithm algorithm = algorithm_from_name(algo_name);
        for (int d : args.dims) {
            const bench::Objective objective = bench::objective_from_name(args.objective, d);
            cells.push_back(
                bench::run_benchmark_cell(algorithm, objective, d, protocol, args.seed,
                                          args.jobs));
        }
    }

    std::ostringstream payload;
    if (args.format == "csv") {
        payload << "algorithm,objective,dim,runs,successes,median_evals,all_premature\n";
        for (const auto& cell : cells) {
            payload << cell.algorithm << ',' << cell.objective << ',' << cell.dimension << ','
                    << cell.runs << ',' << cell.successes << ','
                    << (cell.successes > 0 ? num(cell.median_evals) : "") << ','
                    << (cell.all_premature ? "true" : "false") << '\n';
        }
    } else {
        json rows = json::array();
        for (const auto& cell : cells) {
            json row{{"algorithm", cell.algorithm}, {"objective", cell.objective},
                     {"dim", cell.dimension},       {"runs", cell.runs},
                     {"successes", cell.successes}, {"all_premature", cell.all_premature}};
            if (cell.successes > 0) row["median_evals"] = cell.median_evals;
            rows.push_back(row);
        }
        payload << rows.dump(2) << '\n';
    }
    return OutputTarget{args.out_path}.write(payload.str(), out, err);
}

int cmd_trajectory(const TrajectoryArgs& args, std::ostream& out, std::ostream& err) {
    const Algorithm algorithm = algorithm_from_name(args.algo);
    const bench::Objective objective = bench::objective_from_name(args.function, 1);
    const auto table =
        bench::run_trajectory_experiment(algorithm, objective, args.dt, args.steps, args.seed);

    std::ostringstream payload;
    if (args.format == "csv") {
        payload << "step,t,mu,sigma,dot,event\n";
        for (const auto& row : table) {
            payload << row.step << ',' << num(row.t) << ',' << num(row.mu) << ','
                    << num(row.sigma) << ',' << (row.dot ? 1 : 0) << ',' << row.event << '\n';
        }
    } else {
        json rows = json::array();
        for (const auto& row : table)
            rows.push_back(json{{"step", row.step},
                                {"t", row.t},
                                {"mu", row.mu},
                                {"sigma", row.sigma},
                                {"dot", row.dot},
                                {"event", row.event}});
        payload << rows.dump(2) << '\n';
    }
    return OutputTarget{args.out_path}.write(payload.str(), out, err);
}

int cmd_critical_dt(const CriticalArgs& args, std::ostream& out, std::ostream& err) {
    analysis::CriticalDtInputs inputs;
    inputs.k = args.k;
    inputs.d = args.d;
    inputs.q0 = args.q0;
    inputs.rates = LearningRates(args.eta_mu, args.eta_sigma);

    const analysis::CriticalDtResult result = analysis::critical_dt_detail(inputs);
    const json output{{"alpha", result.alpha},
                      {"beta", result.beta},
                      {"u", result.u},
                      {"v", result.v},
                      {"dt_cr", result.dt_cr}};
    return OutputTarget{args.out_path}.write(output.dump(2) + "\n", out, err);
}

int cmd_verify(const VerifyArgs& args, bool tol_given, std::ostream& out) {
    std::optional<double> tol_override;
    if (tol_given) tol_override = args.tol;

    bool all_pass = true;
    for (int i = 0; i < args.sweep; ++i) {
        const std::uint64_t current = args.seed + static_cast<std::uint64_t>(i);
        if (args.sweep > 1) out << "# seed " << current << "\n";
        for (const auto& property : verify::run_verification_suite(current, tol_override)) {
            out << (property.pass ? "PASS" : "FAIL") << ' ' << property.name
                << " measured=" << num(property.measured) << " tol=" << num(property.tolerance)
                << " (" << property.detail << ")\n";
            all_pass = all_pass && property.pass;
        }
    }
    return all_pass ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Geodesic information-geometric optimization benchmark suite"};
    app.require_subcommand(1);

    BenchArgs bench_args;
    CLI::App* bench_cmd = app.add_subcommand("bench", "Run benchmark cells, one CSV row each");
    bench_cmd->add_option("--objective", bench_args.objective,
                          "objective: sphere | cigar_tablet | rosenbrock");
    bench_cmd->add_option("--dims", bench_args.dims, "dimensions")->delimiter(',');
    bench_cmd->add_option("--algos", bench_args.algos, "algorithms")->delimiter(',');
    bench_cmd->add_option("--seed", bench_args.seed, "master seed");
    bench_cmd->add_option("--runs", bench_args.runs, "runs per cell");
    bench_cmd->add_option("--jobs", bench_args.jobs, "parallel runs per cell");
    bench_cmd->add_option("--max-evals", bench_args.max_evals, "evaluation budget per run");
    bench_cmd->add_option("--out", bench_args.out_path, "output path (default stdout)");
    bench_cmd->add_option("--format", bench_args.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));

    TrajectoryArgs traj_args;
    CLI::App* traj_cmd =
        app.add_subcommand("trajectory", "1-D trajectory experiment (mu, sigma per step)");
    traj_cmd->add_option("--algo", traj_args.algo, "algorithm");
    traj_cmd->add_option("--f", traj_args.function, "objective: quadratic | linear")
        ->check(CLI::IsMember({"quadratic", "linear"}));
    traj_cmd->add_option("--dt", traj_args.dt, "step size")->check(CLI::PositiveNumber);
    traj_cmd->add_option("--steps", traj_args.steps, "number of steps");
    traj_cmd->add_option("--seed", traj_args.seed, "seed");
    traj_cmd->add_option("--out", traj_args.out_path, "output path (default stdout)");
    traj_cmd->add_option("--format", traj_args.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));

    CriticalArgs crit_args;
    CLI::App* crit_cmd = app.add_subcommand(
        "critical-dt", "closed-form critical step size on the linear function");
    crit_cmd->add_option("--k", crit_args.k, "weight amplitude");
    crit_cmd->add_option("--d", crit_args.d, "dimension");
    crit_cmd->add_option("--q0", crit_args.q0, "selection quantile, in (0, 0.5)");
    crit_cmd->add_option("--eta-mu", crit_args.eta_mu, "mean learning rate");
    crit_cmd->add_option("--eta-sigma", crit_args.eta_sigma, "covariance learning rate");
    crit_cmd->add_option("--out", crit_args.out_path, "output path (default stdout)");

    VerifyArgs verify_args;
    CLI::App* verify_cmd =
        app.add_subcommand("verify", "cross-module invariant suite on random instances");
    verify_cmd->add_option("--seed", verify_args.seed, "base seed");
    verify_cmd->add_option("--sweep", verify_args.sweep, "number of consecutive seeds");
    CLI::Option* tol_option =
        verify_cmd->add_option("--tol", verify_args.tol, "override every property tolerance");

    // Config-file values are injected before explicit flags; last one wins.
    for (CLI::App* cmd : {bench_cmd, traj_cmd, crit_cmd, verify_cmd})
        for (CLI::Option* option : cmd->get_options())
            option->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    bool config_ok = true;
    const std::vector<std::string> merged = apply_config_file(args, err, config_ok);
    if (!config_ok) return 1;

    try {
        std::vector<std::string> reversed(merged.rbegin(), merged.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (bench_cmd->parsed()) return cmd_bench(bench_args, out, err);
        if (traj_cmd->parsed()) return cmd_trajectory(traj_args, out, err);
        if (crit_cmd->parsed()) return cmd_critical_dt(crit_args, out, err);
        if (verify_cmd->parsed())
            return cmd_verify(verify_args, tol_option->count() > 0, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << "error: no subcommand\n";
    return 1;
}

}  // namespace gigo::cli

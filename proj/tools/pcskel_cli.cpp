// pcskel: PC skeleton estimation, simulation, benchmarking and population-oracle runs.
//
// Exit codes: 0 ok, 2 malformed input, 3 degenerate data, 4 invalid parameter.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pcskel/ci.hpp"
#include "pcskel/error.hpp"
#include "pcskel/graph.hpp"
#include "pcskel/manifest.hpp"
#include "pcskel/metrics.hpp"
#include "pcskel/pc.hpp"
#include "pcskel/sim.hpp"

namespace {

using namespace pcskel;

enum ExitCode : int { kOk = 0, kInput = 2, kDegenerate = 3, kParameter = 4 };

using Clock = std::chrono::steady_clock;

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    return in;
}

/// Writes to `path`, or stdout when the path is empty or "-".
template <typename Fn>
void write_to(const std::string& path, Fn&& fn) {
    if (path.empty() || path == "-") {
        fn(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    fn(out);
    if (!out) throw InputError("write failed for " + path);
}

void write_manifest(const std::string& path, RunManifest m, Clock::time_point start) {
    if (path.empty()) return;
    m.version = PCSKEL_VERSION;
    m.duration_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    write_to(path, [&](std::ostream& out) { out << to_json(m) << '\n'; });
}

void fill_log(RunManifest& m, const PcResult& r) {
    m.m_reach = r.m_reach;
    m.m_max = r.m_max_effective;
    m.tests_performed = r.log.tests_performed();
    m.tests_per_level = r.log.per_level();
    m.degenerate_queries = r.log.degenerate_queries();
}

struct EstimateArgs {
    std::string input, output, json;
    double alpha = 0.05;
    std::optional<long> m_max;
};

int cmd_estimate(const EstimateArgs& a) {
    const auto start = Clock::now();
    if (!(a.alpha > 0.0 && a.alpha < 1.0)) throw ParameterError("--alpha must lie in the open interval (0, 1)");
    if (a.m_max && *a.m_max < 0) throw ParameterError("--m-max must be >= 0");

    auto in = open_in(a.input);
    const Dataset data = read_dataset_csv(in);
    if (data.rows() < 5) throw InputError("need at least 5 observations, got " + std::to_string(data.rows()));
    if (data.cols() < 2) throw InputError("need at least 2 variables, got " + std::to_string(data.cols()));

    const auto n = static_cast<long>(data.rows());
    const auto p = static_cast<Index>(data.cols());
    const CiDecider decider = CiDecider::sample(sample_correlation(data), n, a.alpha);
    const PcResult result = pc_skeleton(p, decider, PcConfig{a.m_max});

    write_to(a.output, [&](std::ostream& out) { write_edge_list(out, result.skeleton); });

    RunManifest m;
    m.subcommand = "estimate";
    m.alpha = a.alpha;
    m.n = n;
    m.p = p;
    m.paths = {{"input", a.input}, {"output", a.output.empty() ? "-" : a.output}};
    fill_log(m, result);
    write_manifest(a.json, m, start);
    return kOk;
}

struct SimulateArgs {
    Index p = 10;
    long n = 100;
    double s = 0.1;
    std::uint64_t seed = 0;
    std::string data, truth, weights, json;
    bool header = false;
};

int cmd_simulate(const SimulateArgs& a) {
    const auto start = Clock::now();
    const SimConfig config{a.p, a.s, a.n, a.seed};
    config.validate();
    const auto inst = simulate(config);

    write_to(a.data, [&](std::ostream& out) { write_dataset_csv(out, inst.data, a.header); });
    if (!a.truth.empty())
        write_to(a.truth, [&](std::ostream& out) { write_edge_list(out, skeleton_of_dag(inst.dag)); });
    if (!a.weights.empty())
        write_to(a.weights, [&](std::ostream& out) { write_weight_matrix(out, inst.dag); });

    RunManifest m;
    m.subcommand = "simulate";
    m.p = a.p;
    m.n = a.n;
    m.s = a.s;
    m.seed = a.seed;
    m.paths = {{"data", a.data.empty() ? "-" : a.data}};
    if (!a.truth.empty()) m.paths["truth"] = a.truth;
    if (!a.weights.empty()) m.paths["weights"] = a.weights;
    write_manifest(a.json, m, start);
    return kOk;
}

std::vector<BenchmarkConfig> parse_grid(const std::string& spec) {
    std::string text = spec;
    if (text.find_first_not_of(" \t\n") == std::string::npos || (text.front() != '[' && text.front() != '{')) {
        auto in = open_in(spec);
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError(std::string("grid is not valid JSON: ") + e.what());
    }
    if (j.is_object()) j = nlohmann::json::array({j});
    if (!j.is_array() || j.empty()) throw ParameterError("grid must be a non-empty JSON array");

    std::vector<BenchmarkConfig> grid;
    for (const auto& e : j) {
        try {
            BenchmarkConfig c;
            c.p = e.at("p").get<Index>();
            c.n = e.at("n").get<long>();
            c.s = e.at("s").get<double>();
            c.alpha = e.at("alpha").get<double>();
            grid.push_back(c);
        } catch (const nlohmann::json::exception& ex) {
            throw ParameterError(std::string("grid entry needs numeric p, n, s, alpha: ") + ex.what());
        }
    }
    return grid;
}

struct BenchmarkArgs {
    std::string grid, out, json;
    std::size_t replicates = 50;
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

int cmd_benchmark(const BenchmarkArgs& a) {
    const auto start = Clock::now();
    if (a.replicates < 2) throw ParameterError("--replicates must be >= 2 (standard errors are undefined below)");
    const auto grid = parse_grid(a.grid);
    const auto rows = run_benchmark(grid, a.replicates, a.seed, a.workers);
    write_to(a.out, [&](std::ostream& out) { write_benchmark_csv(out, rows); });

    RunManifest m;
    m.subcommand = "benchmark";
    m.seed = a.seed;
    m.replicates = a.replicates;
    m.workers = a.workers;
    m.paths = {{"grid", a.grid}, {"out", a.out.empty() ? "-" : a.out}};
    write_manifest(a.json, m, start);
    return kOk;
}

struct OracleArgs {
    std::string truth, output, json;
    std::optional<long> m_max;
    double zero_tol = 1e-10;
};

int cmd_oracle(const OracleArgs& a) {
    const auto start = Clock::now();
    if (a.m_max && *a.m_max < 0) throw ParameterError("--m-max must be >= 0");
    if (!(a.zero_tol >= 0.0)) throw ParameterError("--zero-tol must be >= 0");
    auto in = open_in(a.truth);
    const WeightedDag dag = read_weight_matrix(in);

    const UndirectedGraph truth = skeleton_of_dag(dag);
    UndirectedGraph estimate(dag.size());
    std::optional<PcResult> result;
    if (dag.size() >= 2) {
        result = pc_skeleton(dag.size(), CiDecider::population(dag, a.zero_tol), PcConfig{a.m_max});
        estimate = result->skeleton;
    }
    write_to(a.output, [&](std::ostream& out) { write_edge_list(out, estimate); });
    if (!a.m_max && estimate != truth)
        std::cerr << "warning: population skeleton differs from the DAG skeleton (unfaithful weights?)\n";

    RunManifest m;
    m.subcommand = "oracle";
    m.p = dag.size();
    m.paths = {{"truth", a.truth}, {"output", a.output.empty() ? "-" : a.output}};
    if (result) fill_log(m, *result);
    write_manifest(a.json, m, start);
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"PC-algorithm skeleton estimation for Gaussian DAG models"};
    app.set_version_flag("--version", PCSKEL_VERSION);
    app.require_subcommand(1);

    EstimateArgs est;
    auto* estimate = app.add_subcommand("estimate", "Estimate the skeleton from a CSV dataset");
    estimate->add_option("--input", est.input, "CSV file, rows are observations")->required();
    estimate->add_option("--alpha", est.alpha, "Significance level in (0, 1)")->capture_default_str();
    estimate->add_option("--m-max", est.m_max, "Cap on the conditioning-set size");
    estimate->add_option("--output", est.output, "Edge list (TSV, 1-indexed); stdout if omitted");
    estimate->add_option("--json", est.json, "Write a run manifest here");

    SimulateArgs sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "Draw a random DAG and Gaussian data from it");
    simulate_cmd->add_option("--p", sim.p, "Number of variables")->required();
    simulate_cmd->add_option("--n", sim.n, "Number of observations")->required();
    simulate_cmd->add_option("--s", sim.s, "Edge probability in (0, 1)")->required();
    simulate_cmd->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
    simulate_cmd->add_option("--data", sim.data, "Dataset CSV; stdout if omitted");
    simulate_cmd->add_option("--truth", sim.truth, "True skeleton edge list");
    simulate_cmd->add_option("--weights", sim.weights, "Weight matrix, p lines of p reals");
    simulate_cmd->add_flag("--header", sim.header, "Write an X1..Xp header row");
    simulate_cmd->add_option("--json", sim.json, "Write a run manifest here");

    BenchmarkArgs bench;
    auto* benchmark = app.add_subcommand("benchmark", "Replicated simulation study over a parameter grid");
    benchmark->add_option("--grid", bench.grid, "JSON file or inline JSON: [{\"p\":..,\"n\":..,\"s\":..,\"alpha\":..}]")
        ->required();
    benchmark->add_option("--replicates", bench.replicates, "Replicates per grid entry")->capture_default_str();
    benchmark->add_option("--seed", bench.seed, "Master seed")->capture_default_str();
    benchmark->add_option("--workers", bench.workers, "Worker threads (0 = all cores)")->capture_default_str();
    benchmark->add_option("--out", bench.out, "CSV output; stdout if omitted");
    benchmark->add_option("--json", bench.json, "Write a run manifest here");

    OracleArgs orc;
    auto* oracle = app.add_subcommand("oracle", "Population PC run from a known weight matrix");
    oracle->add_option("--truth", orc.truth, "Weight matrix file")->required();
    oracle->add_option("--m-max", orc.m_max, "Cap on the conditioning-set size");
    oracle->add_option("--zero-tol", orc.zero_tol, "Partial correlations at or below this are zero")
        ->capture_default_str();
    oracle->add_option("--output", orc.output, "Edge list; stdout if omitted");
    oracle->add_option("--json", orc.json, "Write a run manifest here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kParameter;
    }

    try {
        if (*estimate) return cmd_estimate(est);
        if (*simulate_cmd) return cmd_simulate(sim);
        if (*benchmark) return cmd_benchmark(bench);
        if (*oracle) return cmd_oracle(orc);
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kParameter;
    } catch (const DegenerateDataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDegenerate;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInput;
    }
    return kParameter;
}

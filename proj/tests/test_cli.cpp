#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "pcskel/graph.hpp"
#include "pcskel/manifest.hpp"
#include "pcskel/metrics.hpp"
#include "pcskel/sim.hpp"

using namespace pcskel;
namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::current_path() / "cli_work";

std::string path(const std::string& name) { return (kWork / name).string(); }

int run(const std::string& args, const std::string& stderr_to = "") {
    fs::create_directories(kWork);
    const std::string err = stderr_to.empty() ? path("stderr.txt") : stderr_to;
    const std::string cmd = std::string(PCSKEL_CLI_PATH) + " " + args + " 2>" + err;
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& p, const std::string& text) {
    fs::create_directories(kWork);
    std::ofstream(p, std::ios::binary) << text;
}

WeightedDag chain3() {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
    a(1, 0) = 0.8;
    a(2, 1) = 0.6;
    return WeightedDag(a);
}

} // namespace

TEST_CASE("estimate: perfectly dependent pair") {
    spit(path("dep.csv"), "X1,X2\n1,2\n2,4\n3,6\n4,8\n5,10\n6,12.5\n");
    CHECK(run("estimate --input " + path("dep.csv") + " --alpha 0.05 --output " + path("dep.tsv") + " --json " +
              path("dep.json")) == 0);
    CHECK(slurp(path("dep.tsv")) == "1\t2\n");
    const auto m = manifest_from_json(slurp(path("dep.json")));
    CHECK(m.subcommand == "estimate");
    CHECK(m.alpha == 0.05);
    CHECK(m.m_reach == 0);
    CHECK(m.tests_performed == 2);
}

TEST_CASE("estimate: chain recovered at large n") {
    int exact = 0;
    const CounterRng root(601);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto rng = root.split(seed);
        std::ofstream out(path("chain.csv"));
        write_dataset_csv(out, sample_data(chain3(), 10'000, rng));
        out.close();
        REQUIRE(run("estimate --input " + path("chain.csv") + " --output " + path("chain.tsv")) == 0);
        exact += slurp(path("chain.tsv")) == "1\t2\n2\t3\n";
    }
    CHECK(exact >= 18);
}

TEST_CASE("estimate: error exit codes") {
    spit(path("ok.csv"), "1,2\n2,1\n3,5\n4,3\n5,5\n6,1\n");
    CHECK(run("estimate --input " + path("ok.csv") + " --alpha 1.5", path("alpha.err")) == 4);
    CHECK(slurp(path("alpha.err")).find("(0, 1)") != std::string::npos);
    CHECK(run("estimate --input " + path("ok.csv") + " --alpha 0") == 4);
    CHECK(run("estimate --input " + path("ok.csv") + " --m-max -1") == 4);
    CHECK(run("estimate --input " + path("ok.csv") + " --m-max 2") == 4); // exceeds n - 5

    spit(path("nan.csv"), "1,2\n2,nan\n3,5\n4,3\n5,5\n");
    CHECK(run("estimate --input " + path("nan.csv")) == 2);
    spit(path("ragged.csv"), "1,2\n2\n3,5\n4,3\n5,5\n");
    CHECK(run("estimate --input " + path("ragged.csv")) == 2);
    spit(path("short.csv"), "1,2\n2,3\n3,5\n");
    CHECK(run("estimate --input " + path("short.csv")) == 2);
    CHECK(run("estimate --input " + path("missing.csv")) == 2);

    spit(path("const.csv"), "1,2\n2,2\n3,2\n4,2\n5,2\n");
    CHECK(run("estimate --input " + path("const.csv"), path("const.err")) == 3);
    CHECK(slurp(path("const.err")).find("column 2") != std::string::npos);
}

TEST_CASE("simulate: deterministic and validated") {
    const std::string args = "simulate --p 3 --n 5 --s 0.5 --seed 1 --weights ";
    REQUIRE(run(args + path("w1.txt") + " --data " + path("d1.csv") + " --truth " + path("t1.tsv")) == 0);
    REQUIRE(run(args + path("w2.txt") + " --data " + path("d2.csv") + " --truth " + path("t2.tsv")) == 0);
    CHECK(slurp(path("d1.csv")) == slurp(path("d2.csv")));
    CHECK(slurp(path("t1.tsv")) == slurp(path("t2.tsv")));
    CHECK(slurp(path("w1.txt")) == slurp(path("w2.txt")));
    CHECK(!slurp(path("d1.csv")).empty());

    // The files agree with the library.
    const auto inst = simulate(SimConfig{3, 0.5, 5, 1});
    std::ostringstream data;
    write_dataset_csv(data, inst.data);
    CHECK(slurp(path("d1.csv")) == data.str());

    CHECK(run("simulate --p 3 --n 5 --s 0 --data " + path("x.csv")) == 4);
    CHECK(run("simulate --p 3 --n 5 --s 1 --data " + path("x.csv")) == 4);
    CHECK(run("simulate --p 0 --n 5 --s 0.5 --data " + path("x.csv")) == 4);

    REQUIRE(run("simulate --p 2 --n 3 --s 0.5 --header --data " + path("h.csv")) == 0);
    CHECK(slurp(path("h.csv")).rfind("X1,X2\n", 0) == 0);
}

TEST_CASE("simulate: mean degree over many seeds") {
    double total = 0.0;
    for (int seed = 0; seed < 1000; ++seed) {
        REQUIRE(run("simulate --p 30 --n 1 --s 0.1 --seed " + std::to_string(seed) + " --data " +
                    path("deg.csv") + " --truth " + path("deg.tsv")) == 0);
        std::ifstream in(path("deg.tsv"));
        total += 2.0 * double(read_edge_list(in, 30).edge_count()) / 30.0;
    }
    CHECK(std::abs(total / 1000.0 - 2.9) < 0.1);
}

TEST_CASE("estimate after simulate recovers most edges") {
    double tpr = 0.0;
    for (int seed = 0; seed < 20; ++seed) {
        REQUIRE(run("simulate --p 10 --n 5000 --s 0.1 --seed " + std::to_string(seed) + " --data " +
                    path("es.csv") + " --truth " + path("es_truth.tsv")) == 0);
        REQUIRE(run("estimate --input " + path("es.csv") + " --alpha 0.05 --output " + path("es_est.tsv")) == 0);
        std::ifstream t(path("es_truth.tsv")), e(path("es_est.tsv"));
        const auto truth = read_edge_list(t, 10);
        const auto est = read_edge_list(e, 10);
        // An empty truth counts as full recovery.
        tpr += score_skeleton(est, truth).tpr.value_or(1.0);
    }
    CHECK(tpr / 20.0 >= 0.7);
}

TEST_CASE("benchmark") {
    const std::string grid = R"('[{"p":10,"n":50,"s":0.1,"alpha":0.05},{"p":6,"n":30,"s":0.3,"alpha":0.01}]')";
    REQUIRE(run("benchmark --grid " + grid + " --replicates 8 --seed 3 --workers 2 --out " + path("b2.csv") +
                " --json " + path("b.json")) == 0);
    REQUIRE(run("benchmark --grid " + grid + " --replicates 8 --seed 3 --workers 8 --out " + path("b8.csv")) == 0);
    CHECK(slurp(path("b2.csv")) == slurp(path("b8.csv")));
    CHECK(slurp(path("b2.csv")).rfind("p,n,s,alpha,R,", 0) == 0);
    CHECK(manifest_from_json(slurp(path("b.json"))).replicates == 8);

    spit(path("grid.json"), R"([{"p":10,"n":50,"s":0.1,"alpha":0.05}])");
    CHECK(run("benchmark --grid " + path("grid.json") + " --replicates 1 --out " + path("r1.csv")) == 4);
    CHECK(run("benchmark --grid " + path("grid.json") + " --replicates 3 --out " + path("r3.csv")) == 0);
    CHECK(run(R"(benchmark --grid '[{"p":10,"n":50,"s":0.1}]' --out )" + path("bad.csv")) == 4);
    CHECK(run(R"(benchmark --grid '[{"p":10,"n":50,"s":0.1,"alpha":2}]' --out )" + path("bad.csv")) == 4);
    CHECK(run(R"(benchmark --grid '[' --out )" + path("bad.csv")) == 4);
}

TEST_CASE("oracle") {
    spit(path("chain.w"), "0 0 0\n0.8 0 0\n0 0.6 0\n");
    REQUIRE(run("oracle --truth " + path("chain.w") + " --output " + path("chain_o.tsv")) == 0);
    CHECK(slurp(path("chain_o.tsv")) == "1\t2\n2\t3\n");

    spit(path("zero.w"), "0 0 0 0\n0 0 0 0\n0 0 0 0\n0 0 0 0\n");
    REQUIRE(run("oracle --truth " + path("zero.w") + " --output " + path("zero_o.tsv")) == 0);
    CHECK(slurp(path("zero_o.tsv")).empty());

    spit(path("bad.w"), "0 0\n0 0 0\n");
    CHECK(run("oracle --truth " + path("bad.w")) == 2);
    spit(path("upper.w"), "0 1\n0 0\n");
    CHECK(run("oracle --truth " + path("upper.w")) == 2);

    for (int seed = 0; seed < 50; ++seed) {
        const Index p = 2 + seed % 9;
        REQUIRE(run("simulate --p " + std::to_string(p) + " --n 1 --s 0.35 --seed " + std::to_string(seed) +
                    " --data " + path("o.csv") + " --truth " + path("o_truth.tsv") + " --weights " + path("o.w")) ==
                0);
        REQUIRE(run("oracle --truth " + path("o.w") + " --output " + path("o_est.tsv")) == 0);
        CHECK(slurp(path("o_est.tsv")) == slurp(path("o_truth.tsv")));
    }
}

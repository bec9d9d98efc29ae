#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pcskel/error.hpp"
#include "pcskel/sim.hpp"

using namespace pcskel;

TEST_CASE("CounterRng streams") {
    CounterRng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a() == b());
    const CounterRng root(42);
    auto s1 = root.split(1);
    auto s1b = root.split(1);
    auto s2 = root.split(2);
    CHECK(s1() == s1b());
    CHECK(s1() != s2());
    for (int i = 0; i < 1000; ++i) {
        const double u = a.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("standard_normal moments and distribution") {
    CounterRng first(7), again(7);
    CHECK(standard_normal(first) == standard_normal(again));

    CounterRng rng(8);
    constexpr int n = 100'000;
    std::vector<double> x(n);
    for (auto& v : x) v = standard_normal(rng);
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double m2 = 0.0, m3 = 0.0;
    for (double v : x) {
        m2 += (v - mean) * (v - mean);
        m3 += (v - mean) * (v - mean) * (v - mean);
    }
    m2 /= n;
    m3 /= n;
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(m2 - 1.0) < 0.02);
    CHECK(std::abs(m3 / std::pow(m2, 1.5)) < 0.03);

    // Kolmogorov-Smirnov against Phi at the 0.01 level.
    std::sort(x.begin(), x.end());
    double d = 0.0;
    for (int i = 0; i < n; ++i) {
        const double f = 0.5 * std::erfc(-x[static_cast<std::size_t>(i)] / std::sqrt(2.0));
        d = std::max({d, f - double(i) / n, double(i + 1) / n - f});
    }
    CHECK(d < 1.628 / std::sqrt(double(n)));
}

TEST_CASE("random_dag") {
    SUBCASE("almost never an edge") {
        CounterRng rng(1);
        CHECK(random_dag(10, 1e-9, rng).edge_count() == 0);
    }
    SUBCASE("almost always every edge") {
        CounterRng rng(1);
        const auto dag = random_dag(5, 0.999999, rng);
        CHECK(dag.edge_count() == 10);
        const auto& w = dag.weights();
        for (Index j = 0; j < 5; ++j)
            for (Index i = 0; i < 5; ++i) {
                if (i < j) {
                    CHECK(w(j, i) >= 0.1);
                    CHECK(w(j, i) <= 1.0);
                } else {
                    CHECK(w(j, i) == 0.0);
                }
            }
    }
    SUBCASE("mean degree is s(p - 1)") {
        const CounterRng root(2);
        double total_degree = 0.0;
        double total_edges = 0.0;
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            auto rng = root.split(seed);
            const auto edges = double(random_dag(30, 0.1, rng).edge_count());
            total_degree += 2.0 * edges / 30.0;
            total_edges += edges;
        }
        CHECK(std::abs(total_degree / 1000.0 - 2.9) < 0.1);
        // Edge counts are Binomial(435, 0.1).
        const double se = std::sqrt(435 * 0.1 * 0.9 / 1000.0);
        CHECK(std::abs(total_edges / 1000.0 - 43.5) < 3 * se);
    }
    SUBCASE("weights never fall below 0.1") {
        CounterRng rng(3);
        for (int t = 0; t < 200; ++t) {
            const auto& w = random_dag(20, 0.5, rng).weights();
            CHECK(((w.array() == 0.0) || ((w.array() >= 0.1) && (w.array() <= 1.0))).all());
        }
    }
    SUBCASE("rejects bad parameters") {
        CounterRng rng(4);
        CHECK_THROWS_AS(random_dag(5, 0.0, rng), ParameterError);
        CHECK_THROWS_AS(random_dag(5, 1.0, rng), ParameterError);
        CHECK_THROWS_AS(random_dag(0, 0.5, rng), ParameterError);
    }
}

TEST_CASE("sample_data") {
    SUBCASE("pure noise") {
        CounterRng rng(5);
        const auto x = sample_data(WeightedDag::empty(4), 100'000, rng);
        const Eigen::MatrixXd c = x.rowwise() - x.colwise().mean();
        const Eigen::MatrixXd cov = c.transpose() * c / double(x.rows() - 1);
        CHECK((cov - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 0.02);
    }
    SUBCASE("single edge variance") {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
        a(1, 0) = 0.8;
        CounterRng rng(6);
        const auto x = sample_data(WeightedDag(a), 100'000, rng);
        const Eigen::VectorXd c = x.col(1).array() - x.col(1).mean();
        CHECK(std::abs(c.squaredNorm() / double(x.rows() - 1) - 1.64) < 0.03);
    }
    SUBCASE("rows follow the forward recursion") {
        CounterRng rng(9);
        const auto dag = random_dag(5, 0.6, rng);
        CounterRng replay(10), noise(10);
        const auto x = sample_data(dag, 3, replay);
        for (Index r = 0; r < 3; ++r) {
            Eigen::VectorXd row(5);
            for (Index i = 0; i < 5; ++i) {
                row(i) = standard_normal(noise);
                for (Index k = 0; k < i; ++k) row(i) += dag.weights()(i, k) * row(k);
            }
            CHECK((x.row(r).transpose() - row).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("simulate is reproducible") {
    const SimConfig config{12, 0.3, 50, 99};
    const auto a = simulate(config);
    const auto b = simulate(config);
    CHECK(a.dag.weights() == b.dag.weights());
    CHECK(a.data == b.data);
    const auto c = simulate(SimConfig{12, 0.3, 50, 100});
    CHECK(a.data != c.data);
    CHECK_THROWS_AS(simulate(SimConfig{12, 0.0, 50, 1}), ParameterError);
    CHECK_THROWS_AS(simulate(SimConfig{12, 0.5, 0, 1}), ParameterError);
}

TEST_CASE("dataset CSV") {
    const auto inst = simulate(SimConfig{4, 0.5, 20, 3});
    for (bool header : {false, true}) {
        std::stringstream io;
        write_dataset_csv(io, inst.data, header);
        if (header) CHECK(io.str().rfind("X1,X2,X3,X4\n", 0) == 0);
        CHECK(read_dataset_csv(io) == inst.data);
    }
    std::istringstream sci("1e-3,2.5E2\n-3,+4\n");
    const auto d = read_dataset_csv(sci);
    CHECK(d(0, 0) == 1e-3);
    CHECK(d(0, 1) == 250.0);
    CHECK(d(1, 1) == 4.0);

    std::istringstream ragged("1,2\n3\n");
    CHECK_THROWS_AS(read_dataset_csv(ragged), InputError);
    std::istringstream nan("1,2\nnan,3\n");
    CHECK_THROWS_AS(read_dataset_csv(nan), InputError);
    std::istringstream comma_decimal("1,5;2\n");
    CHECK_THROWS_AS(read_dataset_csv(comma_decimal), InputError);
    std::istringstream empty("");
    CHECK_THROWS_AS(read_dataset_csv(empty), InputError);
}

TEST_CASE("weight matrix file") {
    const auto inst = simulate(SimConfig{6, 0.5, 1, 8});
    std::stringstream io;
    write_weight_matrix(io, inst.dag);
    CHECK(read_weight_matrix(io).weights() == inst.dag.weights());

    std::istringstream upper("0 1\n0 0\n");
    CHECK_THROWS_AS(read_weight_matrix(upper), InputError);
    std::istringstream ragged("0 0\n0.5\n");
    CHECK_THROWS_AS(read_weight_matrix(ragged), InputError);
    std::istringstream junk("0 x\n0 0\n");
    CHECK_THROWS_AS(read_weight_matrix(junk), InputError);
}

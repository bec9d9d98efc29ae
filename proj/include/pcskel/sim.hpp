#pragma once

#include <cstdint>
#include <iosfwd>

#include <Eigen/Dense>

#include "pcskel/graph.hpp"
#include "pcskel/rng.hpp"

namespace pcskel {

struct SimConfig {
    Index p = 10;
    double s = 0.1;
    long n = 100;
    std::uint64_t seed = 0;

    /// Throws ParameterError unless 0 < s < 1, p >= 1, n >= 1.
    void validate() const;
};

using Dataset = Eigen::MatrixXd;

/// Standard normal draw (Box-Muller on two uniforms; no cached second value so the
/// draw count per call is fixed).
double standard_normal(CounterRng& rng);

/// Lower-triangle Bernoulli(s) pass in row-major order, then a Uniform[0.1, 1] weight
/// for each selected entry in the same order.
WeightedDag random_dag(Index p, double s, CounterRng& rng);

/// n i.i.d. rows of X_i = sum_{k<i} A_ik X_k + eps_i, eps ~ N(0, 1).
Dataset sample_data(const WeightedDag& dag, long n, CounterRng& rng);

struct SimulatedInstance {
    WeightedDag dag;
    Dataset data;
};

/// DAG and data from the stream derived from config.seed.
SimulatedInstance simulate(const SimConfig& config);

/// Comma separated, "%.17g" numbers; optional X1..Xp header.
void write_dataset_csv(std::ostream& out, const Dataset& data, bool header = false);
/// Accepts an optional header line (detected when its first field is not a number).
Dataset read_dataset_csv(std::istream& in);

/// p lines of p space-separated reals.
void write_weight_matrix(std::ostream& out, const WeightedDag& dag);
WeightedDag read_weight_matrix(std::istream& in);

} // namespace pcskel

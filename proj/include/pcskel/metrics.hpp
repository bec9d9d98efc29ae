#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "pcskel/graph.hpp"

namespace pcskel {

struct SkeletonScore {
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    std::optional<double> tpr; ///< missing when the truth has no edges
    double fpr = 0.0;          ///< 0 when the truth is complete
    std::optional<double> tdr; ///< missing when nothing was estimated
};

SkeletonScore score_skeleton(const UndirectedGraph& estimated, const UndirectedGraph& truth);

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

/// Mean and sd / sqrt(len) with the n - 1 sd. Values are summed in sorted order.
MeanSe aggregate(std::span<const double> values);

struct BenchmarkConfig {
    Index p = 10;
    long n = 50;
    double s = 0.1;
    double alpha = 0.05;
};

struct BenchmarkRow {
    BenchmarkConfig config;
    std::size_t replicates = 0;
    MeanSe tpr, fpr, tdr, m_reach;
    std::size_t tpr_excluded = 0;
    std::size_t tdr_excluded = 0;
};

struct ReplicateOutcome {
    SkeletonScore score;
    long m_reach = 0;
};

/// One replicate: fresh DAG, data, correlation, PC, score. Replicate r of every grid
/// row draws from stream r of master_seed.
ReplicateOutcome run_replicate(const BenchmarkConfig& config, std::uint64_t master_seed, std::size_t r);

/// Throws ParameterError on an invalid grid entry or fewer than two replicates.
/// workers == 0 picks the hardware concurrency. Output does not depend on workers.
std::vector<BenchmarkRow> run_benchmark(const std::vector<BenchmarkConfig>& grid, std::size_t replicates,
                                        std::uint64_t master_seed, unsigned workers = 1);

void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows);

} // namespace pcskel

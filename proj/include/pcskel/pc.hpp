#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pcskel/ci.hpp"
#include "pcskel/graph.hpp"

namespace pcskel {

struct PcConfig {
    /// Cap on the conditioning-set size. Unset: run until natural termination
    /// (sample mode still caps at min(p - 2, n - 5)).
    std::optional<long> m_max;
};

struct PcResult {
    UndirectedGraph skeleton;
    /// Largest level at which at least one ordered pair passed the size gate.
    long m_reach = 0;
    CiQueryLog log;
    /// Effective cap used by the run.
    long m_max_effective = 0;
    bool sample_mode = true;
    double alpha = 0.0;
    long n = 0;
};

/// The cap actually applied for this decider and config. Throws ParameterError on a
/// negative cap or one that would make the sample test undefined.
long effective_m_max(Index p, const CiDecider& decider, const PcConfig& config);

/// PC(m) skeleton search. Ordered pairs are scanned lexicographically at every level
/// and conditioning sets are drawn from the current adjacency of the first vertex, so
/// deletions made earlier in a level affect later pairs of the same level.
PcResult pc_skeleton(Index p, const CiDecider& decider, const PcConfig& config = {});

/// Lexicographic l-subsets of a sorted set.
class SubsetEnumerator {
public:
    SubsetEnumerator(std::span<const Index> set, std::size_t size);

    /// Current subset; valid until the next call to advance().
    std::span<const Index> current() const noexcept { return current_; }
    bool done() const noexcept { return done_; }
    void advance();

private:
    std::vector<Index> set_;
    std::vector<std::size_t> pos_;
    std::vector<Index> current_;
    bool done_ = false;
};

std::vector<VertexSet> enumerate_subsets(std::span<const Index> set, std::size_t size);

/// Edge {i, j} iff |rho_{i,j|s}| > zero_tol for every s subset of V \ {i, j}. p <= 12.
UndirectedGraph brute_force_skeleton(const CorrelationMatrix& corr, double zero_tol = 1e-10);

} // namespace pcskel

#include "pcskel/pc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pcskel {

long effective_m_max(Index p, const CiDecider& decider, const PcConfig& config) {
    const long natural = std::max<long>(0, p - 2);
    long sample_cap = natural;
    if (const auto* t = std::get_if<SampleTest>(&decider.variant())) sample_cap = t->n - 5;

    if (config.m_max) {
        if (*config.m_max < 0) throw ParameterError("m_max must be >= 0");
        if (decider.is_sample() && *config.m_max > sample_cap)
            throw ParameterError("m_max = " + std::to_string(*config.m_max) + " exceeds n - 5 = " +
                                 std::to_string(sample_cap));
        return std::min(*config.m_max, natural);
    }
    return std::max<long>(0, std::min(natural, sample_cap));
}

PcResult pc_skeleton(Index p, const CiDecider& decider, const PcConfig& config) {
    if (p < 2) throw ParameterError("pc_skeleton requires p >= 2");
    if (decider.size() != p) throw InputError("decider dimension does not match p");

    PcResult result;
    result.m_max_effective = effective_m_max(p, decider, config);
    if (const auto* t = std::get_if<SampleTest>(&decider.variant())) {
        result.sample_mode = true;
        result.alpha = t->alpha;
        result.n = t->n;
    } else {
        result.sample_mode = false;
    }

    UndirectedGraph graph = UndirectedGraph::complete(p);
    VertexSet candidates;

    for (long level = 0;; ++level) {
        const auto size = static_cast<std::size_t>(level);
        bool gate_passed = false;

        for (Index i = 0; i < p; ++i) {
            const VertexSet snapshot = graph.neighbors(i);
            for (Index j : snapshot) {
                if (!graph.adjacent(i, j)) continue;
                candidates.clear();
                for (Index v : graph.neighbors(i))
                    if (v != j) candidates.push_back(v);
                if (candidates.size() < size) continue;
                gate_passed = true;

                for (SubsetEnumerator subsets(candidates, size); !subsets.done(); subsets.advance()) {
                    bool independent = false;
                    try {
                        independent = ci_test(decider, i, j, subsets.current(), &result.log);
                    } catch (const DegenerateQueryError&) {
                        // Singular submatrix: no evidence of independence, keep the edge.
                        result.log.record(size);
                        result.log.record_degenerate();
                    }
                    if (independent) {
                        graph.remove_edge(i, j);
                        break;
                    }
                }
            }
        }

        if (gate_passed) result.m_reach = level;
        if (level >= result.m_max_effective) break;

        bool can_continue = false;
        for (Index i = 0; i < p && !can_continue; ++i)
            can_continue = graph.degree(i) >= 1 && graph.degree(i) - 1 > size;
        if (!can_continue) break;
    }

    result.skeleton = std::move(graph);
    return result;
}

SubsetEnumerator::SubsetEnumerator(std::span<const Index> set, std::size_t size)
    : set_(set.begin(), set.end()), pos_(size), current_(size) {
    if (size > set_.size()) {
        done_ = true;
        return;
    }
    for (std::size_t a = 0; a < size; ++a) {
        pos_[a] = a;
        current_[a] = set_[a];
    }
}

void SubsetEnumerator::advance() {
    if (done_) return;
    const std::size_t k = pos_.size();
    const std::size_t n = set_.size();
    // Rightmost position that can still move right.
    std::size_t a = k;
    while (a > 0 && pos_[a - 1] == n - k + (a - 1)) --a;
    if (a == 0) {
        done_ = true;
        return;
    }
    ++pos_[a - 1];
    for (std::size_t b = a; b < k; ++b) pos_[b] = pos_[b - 1] + 1;
    for (std::size_t b = a - 1; b < k; ++b) current_[b] = set_[pos_[b]];
}

std::vector<VertexSet> enumerate_subsets(std::span<const Index> set, std::size_t size) {
    std::vector<VertexSet> out;
    for (SubsetEnumerator e(set, size); !e.done(); e.advance())
        out.emplace_back(e.current().begin(), e.current().end());
    return out;
}

UndirectedGraph brute_force_skeleton(const CorrelationMatrix& corr, double zero_tol) {
    const Index p = corr.size();
    if (p > 12) throw ParameterError("brute_force_skeleton refuses p > 12");

    UndirectedGraph g(p);
    VertexSet others, k;
    for (Index i = 0; i < p; ++i) {
        for (Index j = i + 1; j < p; ++j) {
            others.clear();
            for (Index v = 0; v < p; ++v)
                if (v != i && v != j) others.push_back(v);

            bool dependent_always = true;
            const unsigned long subsets = 1UL << others.size();
            for (unsigned long mask = 0; mask < subsets && dependent_always; ++mask) {
                k.clear();
                for (std::size_t b = 0; b < others.size(); ++b)
                    if (mask & (1UL << b)) k.push_back(others[b]);
                dependent_always = std::abs(partial_correlation(corr, i, j, k)) > zero_tol;
            }
            if (dependent_always) g.add_edge(i, j);
        }
    }
    return g;
}

} // namespace pcskel

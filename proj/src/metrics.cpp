#include "pcskel/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <thread>

#include "pcskel/ci.hpp"
#include "pcskel/error.hpp"
#include "pcskel/pc.hpp"
#include "pcskel/sim.hpp"

namespace pcskel {

SkeletonScore score_skeleton(const UndirectedGraph& estimated, const UndirectedGraph& truth) {
    if (estimated.size() != truth.size()) throw InputError("graphs have different vertex counts");
    SkeletonScore s;
    const Index p = truth.size();
    for (Index i = 0; i < p; ++i) {
        for (Index j = i + 1; j < p; ++j) {
            const bool e = estimated.adjacent(i, j);
            const bool t = truth.adjacent(i, j);
            if (e && t) ++s.tp;
            else if (e) ++s.fp;
            else if (t) ++s.fn;
            else ++s.tn;
        }
    }
    if (s.tp + s.fn > 0) s.tpr = static_cast<double>(s.tp) / static_cast<double>(s.tp + s.fn);
    if (s.fp + s.tn > 0) s.fpr = static_cast<double>(s.fp) / static_cast<double>(s.fp + s.tn);
    if (s.tp + s.fp > 0) s.tdr = static_cast<double>(s.tp) / static_cast<double>(s.tp + s.fp);
    return s;
}

MeanSe aggregate(std::span<const double> values) {
    if (values.size() < 2) throw ParameterError("aggregate needs at least two values");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double sum = 0.0;
    for (double v : sorted) sum += v;
    const double mean = sum / n;
    double ss = 0.0;
    for (double v : sorted) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

namespace {

void validate(const BenchmarkConfig& c) {
    SimConfig{c.p, c.s, c.n, 0}.validate();
    if (c.p < 2) throw ParameterError("benchmark needs p >= 2");
    if (c.n < 5) throw ParameterError("benchmark needs n >= 5");
    if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
}

} // namespace

ReplicateOutcome run_replicate(const BenchmarkConfig& config, std::uint64_t master_seed, std::size_t r) {
    CounterRng rng = CounterRng(master_seed).split(r);
    const WeightedDag dag = random_dag(config.p, config.s, rng);
    const Dataset data = sample_data(dag, config.n, rng);
    const CiDecider decider = CiDecider::sample(sample_correlation(data), config.n, config.alpha);
    const PcResult fit = pc_skeleton(config.p, decider);
    return {score_skeleton(fit.skeleton, skeleton_of_dag(dag)), fit.m_reach};
}

std::vector<BenchmarkRow> run_benchmark(const std::vector<BenchmarkConfig>& grid, std::size_t replicates,
                                        std::uint64_t master_seed, unsigned workers) {
    if (replicates < 2) throw ParameterError("replicates must be >= 2 for standard errors");
    for (const auto& c : grid) validate(c);

    const std::size_t tasks = grid.size() * replicates;
    std::vector<ReplicateOutcome> outcomes(tasks);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t t; (t = next.fetch_add(1)) < tasks;)
            outcomes[t] = run_replicate(grid[t / replicates], master_seed, t % replicates);
    };

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(tasks, 1)));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    std::vector<BenchmarkRow> rows;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        BenchmarkRow row;
        row.config = grid[g];
        row.replicates = replicates;
        std::vector<double> tpr, fpr, tdr, mreach;
        for (std::size_t r = 0; r < replicates; ++r) {
            const auto& o = outcomes[g * replicates + r];
            if (o.score.tpr) tpr.push_back(*o.score.tpr);
            else ++row.tpr_excluded;
            if (o.score.tdr) tdr.push_back(*o.score.tdr);
            else ++row.tdr_excluded;
            fpr.push_back(o.score.fpr);
            mreach.push_back(static_cast<double>(o.m_reach));
        }
        constexpr double nan = std::numeric_limits<double>::quiet_NaN();
        row.tpr = tpr.size() >= 2 ? aggregate(tpr) : MeanSe{nan, nan};
        row.tdr = tdr.size() >= 2 ? aggregate(tdr) : MeanSe{nan, nan};
        row.fpr = aggregate(fpr);
        row.m_reach = aggregate(mreach);
        rows.push_back(row);
    }
    return rows;
}

void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows) {
    out << "p,n,s,alpha,R,tpr_mean,tpr_se,fpr_mean,fpr_se,tdr_mean,tdr_se,mreach_mean,mreach_se,tdr_excluded\n";
    char buf[512];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%ld,%.10g,%.10g,%zu,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%zu\n",
                      r.config.p, r.config.n, r.config.s, r.config.alpha, r.replicates, r.tpr.mean, r.tpr.se,
                      r.fpr.mean, r.fpr.se, r.tdr.mean, r.tdr.se, r.m_reach.mean, r.m_reach.se, r.tdr_excluded);
        out << buf;
    }
}

} // namespace pcskel

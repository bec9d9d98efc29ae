#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "pcskel/error.hpp"
#include "pcskel/graph.hpp"

namespace pcskel {

/// Symmetric p x p correlation matrix with unit diagonal. All CI queries read from it.
class CorrelationMatrix {
public:
    /// Validates symmetry, unit diagonal and range; does not rescale.
    explicit CorrelationMatrix(Eigen::MatrixXd r);

    /// Rescales a covariance matrix to unit diagonal.
    static CorrelationMatrix from_covariance(const Eigen::MatrixXd& cov);

    Index size() const noexcept { return static_cast<Index>(r_.rows()); }
    const Eigen::MatrixXd& matrix() const noexcept { return r_; }
    double operator()(Index i, Index j) const { return r_(i, j); }

private:
    Eigen::MatrixXd r_;
};

/// Pearson correlations of the columns of an n x p data matrix.
CorrelationMatrix sample_correlation(const Eigen::MatrixXd& data);

/// Submatrices with reciprocal condition estimate below this are treated as singular.
inline constexpr double kMinReciprocalCondition = 1e-12;

/// rho_{i,j|k} by inverting the correlation submatrix on {i, j} u k.
/// Throws DegenerateQueryError when that submatrix is numerically singular.
template <typename Derived>
double partial_correlation(const Eigen::MatrixBase<Derived>& corr, Index i, Index j,
                           std::span<const Index> k) {
    if (k.empty()) return corr(i, j);
    // Canonical order makes the result bit-identical under i <-> j.
    if (j < i) std::swap(i, j);

    const Index m = static_cast<Index>(k.size()) + 2;
    VertexSet vars;
    vars.reserve(static_cast<std::size_t>(m));
    vars.push_back(i);
    vars.push_back(j);
    for (Index v : k) {
        if (v == i || v == j) throw InputError("conditioning set contains i or j");
        vars.push_back(v);
    }

    using Scalar = typename Derived::Scalar;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> sub(m, m);
    for (Index a = 0; a < m; ++a)
        for (Index b = 0; b < m; ++b) sub(a, b) = corr(vars[a], vars[b]);

    const Eigen::LDLT<decltype(sub)> ldlt(sub);
    // Zero pivots are skipped by LDLT::solve, so check them before trusting rcond().
    const auto pivots = ldlt.vectorD();
    if (ldlt.info() != Eigen::Success || !(pivots.minCoeff() > kMinReciprocalCondition * pivots.maxCoeff()) ||
        ldlt.rcond() < kMinReciprocalCondition)
        throw DegenerateQueryError("singular correlation submatrix", std::move(vars));

    // Only the leading 2x2 block of the inverse is needed.
    Eigen::Matrix<Scalar, Eigen::Dynamic, 2> rhs = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>::Zero(m, 2);
    rhs(0, 0) = 1;
    rhs(1, 1) = 1;
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 2> cols = ldlt.solve(rhs);
    const Scalar pii = cols(0, 0);
    const Scalar pjj = cols(1, 1);
    const Scalar pij = (cols(1, 0) + cols(0, 1)) / 2;
    if (!(pii > 0) || !(pjj > 0))
        throw DegenerateQueryError("non-positive precision diagonal", std::move(vars));

    const double rho = static_cast<double>(-pij / std::sqrt(pii * pjj));
    return std::clamp(rho, -1.0, 1.0);
}

double partial_correlation(const CorrelationMatrix& corr, Index i, Index j, std::span<const Index> k);

/// Same quantity through the first-order recursion on h = max(k). Exponential in |k|;
/// intended for cross-checking.
double partial_correlation_recursive(const CorrelationMatrix& corr, Index i, Index j,
                                     std::span<const Index> k);

inline constexpr double kFisherClamp = 1.0 - 1e-12;

/// 0.5 * log((1 + rho) / (1 - rho)) with |rho| clamped to 1 - 1e-12.
double fisher_z(double rho);
double fisher_z_inverse(double z);

/// Standard normal cdf.
double normal_cdf(double x);
/// Inverse of the standard normal cdf, absolute error well below 1e-8 on (0, 1).
double normal_quantile(double q);

/// Bookkeeping for one run. Counters are atomic so several threads can share a log.
class CiQueryLog {
public:
    CiQueryLog() = default;
    CiQueryLog(const CiQueryLog& other);
    CiQueryLog& operator=(const CiQueryLog& other);

    void record(std::size_t cond_size);
    void record_degenerate() { degenerate_.fetch_add(1, std::memory_order_relaxed); }

    std::size_t tests_performed() const { return tests_.load(std::memory_order_relaxed); }
    std::size_t degenerate_queries() const { return degenerate_.load(std::memory_order_relaxed); }
    /// -1 before any query.
    long max_cond_size_used() const { return max_cond_.load(std::memory_order_relaxed); }
    /// Test count per conditioning-set size.
    std::vector<std::size_t> per_level() const;

    /// Adds another log's counts into this one.
    void merge(const CiQueryLog& other);

private:
    static constexpr std::size_t kMaxLevels = 256;

    std::atomic<std::size_t> tests_{0};
    std::atomic<std::size_t> degenerate_{0};
    std::atomic<long> max_cond_{-1};
    std::array<std::atomic<std::size_t>, kMaxLevels> levels_{};
};

/// Fisher-z test at level alpha on a sample correlation matrix from n observations.
struct SampleTest {
    CorrelationMatrix corr;
    long n;
    double alpha;
};

/// Exact answers from a population correlation matrix: independent iff |rho| <= zero_tol.
struct PopulationOracle {
    CorrelationMatrix corr;
    double zero_tol = 1e-10;
};

class CiDecider {
public:
    CiDecider(SampleTest test);
    CiDecider(PopulationOracle oracle);

    static CiDecider sample(CorrelationMatrix corr, long n, double alpha);
    static CiDecider population(const WeightedDag& dag, double zero_tol = 1e-10);

    Index size() const noexcept;
    const CorrelationMatrix& correlation() const noexcept;
    bool is_sample() const noexcept { return std::holds_alternative<SampleTest>(variant_); }
    const std::variant<SampleTest, PopulationOracle>& variant() const noexcept { return variant_; }

    /// Largest admissible |k| for the sample test (n - 4); unbounded (p) for the oracle.
    long max_conditioning_size() const noexcept;

    /// Phi^{-1}(1 - alpha/2) for the sample test.
    double critical_value() const noexcept { return critical_; }

private:
    std::variant<SampleTest, PopulationOracle> variant_;
    double critical_ = 0.0;
};

/// true means "i and j are conditionally independent given k".
bool ci_test(const CiDecider& decider, Index i, Index j, std::span<const Index> k,
             CiQueryLog* log = nullptr);

/// sqrt(n - |k| - 3) * |Z(i, j | k)|; exposed for diagnostics.
double ci_statistic(const SampleTest& test, Index i, Index j, std::span<const Index> k);

} // namespace pcskel

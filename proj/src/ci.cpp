#include "pcskel/ci.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace pcskel {

namespace {

constexpr double kUnitTol = 1e-10;

} // namespace

CorrelationMatrix::CorrelationMatrix(Eigen::MatrixXd r) : r_(std::move(r)) {
    if (r_.rows() != r_.cols() || r_.rows() < 1) throw InputError("correlation matrix must be square");
    if (!r_.allFinite()) throw InputError("correlation matrix has non-finite entries");
    const Index p = size();
    for (Index i = 0; i < p; ++i) {
        if (std::abs(r_(i, i) - 1.0) > kUnitTol) throw InputError("correlation diagonal must be 1");
        r_(i, i) = 1.0;
        for (Index j = 0; j < i; ++j) {
            if (std::abs(r_(i, j) - r_(j, i)) > kUnitTol) throw InputError("correlation matrix not symmetric");
            if (std::abs(r_(i, j)) > 1.0 + kUnitTol) throw InputError("correlation outside [-1, 1]");
            const double v = std::clamp((r_(i, j) + r_(j, i)) / 2.0, -1.0, 1.0);
            r_(i, j) = v;
            r_(j, i) = v;
        }
    }
}

CorrelationMatrix CorrelationMatrix::from_covariance(const Eigen::MatrixXd& cov) {
    if (cov.rows() != cov.cols()) throw InputError("covariance matrix must be square");
    const Eigen::ArrayXd diag = cov.diagonal().array();
    if ((diag <= 0.0).any()) throw DegenerateDataError("covariance has a non-positive variance");
    const Eigen::VectorXd inv_sd = diag.rsqrt().matrix();
    Eigen::MatrixXd r = inv_sd.asDiagonal() * cov * inv_sd.asDiagonal();
    r.diagonal().setOnes();
    r = ((r + r.transpose()) / 2.0).cwiseMax(-1.0).cwiseMin(1.0);
    return CorrelationMatrix(std::move(r));
}

CorrelationMatrix sample_correlation(const Eigen::MatrixXd& data) {
    const auto n = data.rows();
    const auto p = data.cols();
    if (n < 2) throw InputError("sample correlation needs at least 2 observations");
    if (p < 1) throw InputError("sample correlation needs at least 1 variable");
    if (!data.allFinite()) throw InputError("data contains non-finite values");

    const Eigen::RowVectorXd mean = data.colwise().mean();
    const Eigen::MatrixXd centered = data.rowwise() - mean;
    for (Eigen::Index c = 0; c < p; ++c) {
        if (data.col(c).maxCoeff() == data.col(c).minCoeff() || centered.col(c).squaredNorm() == 0.0)
            throw DegenerateDataError("column " + std::to_string(c + 1) + " has zero variance");
    }
    Eigen::MatrixXd cov(p, p);
    cov.setZero();
    cov.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose());
    cov = cov.selfadjointView<Eigen::Lower>();
    return CorrelationMatrix::from_covariance(cov);
}

double partial_correlation(const CorrelationMatrix& corr, Index i, Index j, std::span<const Index> k) {
    return partial_correlation(corr.matrix(), i, j, k);
}

namespace {

double recurse(const Eigen::MatrixXd& r, Index i, Index j, std::span<const Index> k) {
    if (k.empty()) return r(i, j);
    auto h_it = std::max_element(k.begin(), k.end());
    const Index h = *h_it;
    VertexSet rest;
    rest.reserve(k.size() - 1);
    for (auto it = k.begin(); it != k.end(); ++it)
        if (it != h_it) rest.push_back(*it);

    const double rij = recurse(r, i, j, rest);
    const double rih = recurse(r, i, h, rest);
    const double rjh = recurse(r, j, h, rest);
    const double a = 1.0 - rih * rih;
    const double b = 1.0 - rjh * rjh;
    if (a < 1e-14 || b < 1e-14) {
        VertexSet vars{i, j};
        vars.insert(vars.end(), k.begin(), k.end());
        throw DegenerateQueryError("recursion denominator underflow", std::move(vars));
    }
    return std::clamp((rij - rih * rjh) / std::sqrt(a * b), -1.0, 1.0);
}

} // namespace

double partial_correlation_recursive(const CorrelationMatrix& corr, Index i, Index j,
                                     std::span<const Index> k) {
    return recurse(corr.matrix(), i, j, k);
}

double fisher_z(double rho) {
    // atanh(r) = 0.5 * log((1 + r) / (1 - r)); evaluated on |r| so the result is exactly odd.
    const double r = std::min(std::abs(rho), kFisherClamp);
    return std::copysign(std::atanh(r), rho);
}

double fisher_z_inverse(double z) { return std::tanh(z); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double q) {
    if (!(q > 0.0 && q < 1.0)) throw ParameterError("normal_quantile requires 0 < q < 1");

    // Acklam's rational approximation (relative error ~1e-9) ...
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01,  -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    constexpr double lower = 0.02425;

    double x;
    if (q < lower) {
        const double t = std::sqrt(-2.0 * std::log(q));
        x = (((((c[0] * t + c[1]) * t + c[2]) * t + c[3]) * t + c[4]) * t + c[5]) /
            ((((d[0] * t + d[1]) * t + d[2]) * t + d[3]) * t + 1.0);
    } else if (q <= 1.0 - lower) {
        const double t = q - 0.5;
        const double r = t * t;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * t /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double t = std::sqrt(-2.0 * std::log1p(-q));
        x = -(((((c[0] * t + c[1]) * t + c[2]) * t + c[3]) * t + c[4]) * t + c[5]) /
            ((((d[0] * t + d[1]) * t + d[2]) * t + d[3]) * t + 1.0);
    }

    // ... followed by one Halley step against erfc. Work in the smaller tail so the
    // residual keeps its relative precision.
    const double e = q < 0.5 ? normal_cdf(x) - q : (1.0 - q) - normal_cdf(-x);
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

CiQueryLog::CiQueryLog(const CiQueryLog& other) { merge(other); }

CiQueryLog& CiQueryLog::operator=(const CiQueryLog& other) {
    if (this == &other) return *this;
    tests_ = 0;
    degenerate_ = 0;
    max_cond_ = -1;
    for (auto& l : levels_) l = 0;
    merge(other);
    return *this;
}

void CiQueryLog::record(std::size_t cond_size) {
    tests_.fetch_add(1, std::memory_order_relaxed);
    levels_[std::min(cond_size, kMaxLevels - 1)].fetch_add(1, std::memory_order_relaxed);
    long seen = max_cond_.load(std::memory_order_relaxed);
    const long size = static_cast<long>(cond_size);
    while (size > seen && !max_cond_.compare_exchange_weak(seen, size, std::memory_order_relaxed)) {
    }
}

std::vector<std::size_t> CiQueryLog::per_level() const {
    const long top = max_cond_size_used();
    std::vector<std::size_t> out;
    for (long l = 0; l <= top && l < static_cast<long>(kMaxLevels); ++l)
        out.push_back(levels_[static_cast<std::size_t>(l)].load(std::memory_order_relaxed));
    return out;
}

void CiQueryLog::merge(const CiQueryLog& other) {
    tests_.fetch_add(other.tests_performed(), std::memory_order_relaxed);
    degenerate_.fetch_add(other.degenerate_queries(), std::memory_order_relaxed);
    for (std::size_t l = 0; l < kMaxLevels; ++l)
        levels_[l].fetch_add(other.levels_[l].load(std::memory_order_relaxed), std::memory_order_relaxed);
    long seen = max_cond_.load(std::memory_order_relaxed);
    const long theirs = other.max_cond_size_used();
    while (theirs > seen && !max_cond_.compare_exchange_weak(seen, theirs, std::memory_order_relaxed)) {
    }
}

CiDecider::CiDecider(SampleTest test) : variant_(std::move(test)) {
    const auto& t = std::get<SampleTest>(variant_);
    if (!(t.alpha > 0.0 && t.alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
    if (t.n < 5) throw ParameterError("sample test needs n >= 5");
    critical_ = normal_quantile(1.0 - t.alpha / 2.0);
}

CiDecider::CiDecider(PopulationOracle oracle) : variant_(std::move(oracle)) {
    if (!(std::get<PopulationOracle>(variant_).zero_tol >= 0.0))
        throw ParameterError("zero tolerance must be non-negative");
}

CiDecider CiDecider::sample(CorrelationMatrix corr, long n, double alpha) {
    return CiDecider(SampleTest{std::move(corr), n, alpha});
}

CiDecider CiDecider::population(const WeightedDag& dag, double zero_tol) {
    return CiDecider(PopulationOracle{CorrelationMatrix::from_covariance(true_covariance(dag)), zero_tol});
}

const CorrelationMatrix& CiDecider::correlation() const noexcept {
    return std::visit([](const auto& v) -> const CorrelationMatrix& { return v.corr; }, variant_);
}

Index CiDecider::size() const noexcept { return correlation().size(); }

long CiDecider::max_conditioning_size() const noexcept {
    if (const auto* t = std::get_if<SampleTest>(&variant_)) return t->n - 4;
    return size();
}

double ci_statistic(const SampleTest& test, Index i, Index j, std::span<const Index> k) {
    const long dof = test.n - static_cast<long>(k.size()) - 3;
    if (dof < 1)
        throw ConditioningSetTooLarge("n - |k| - 3 = " + std::to_string(dof) + " < 1 for |k| = " +
                                      std::to_string(k.size()));
    const double rho = partial_correlation(test.corr.matrix(), i, j, k);
    return std::sqrt(static_cast<double>(dof)) * std::abs(fisher_z(rho));
}

bool ci_test(const CiDecider& decider, Index i, Index j, std::span<const Index> k, CiQueryLog* log) {
    if (i == j) throw InputError("ci_test requires i != j");
    bool independent;
    if (const auto* t = std::get_if<SampleTest>(&decider.variant())) {
        independent = ci_statistic(*t, i, j, k) <= decider.critical_value();
    } else {
        const auto& o = std::get<PopulationOracle>(decider.variant());
        independent = std::abs(partial_correlation(o.corr.matrix(), i, j, k)) <= o.zero_tol;
    }
    if (log) log->record(k.size());
    return independent;
}

} // namespace pcskel

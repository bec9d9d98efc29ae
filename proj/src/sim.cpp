#include "pcskel/sim.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "pcskel/error.hpp"

namespace pcskel {

void SimConfig::validate() const {
    if (p < 1) throw ParameterError("p must be >= 1");
    if (!(s > 0.0 && s < 1.0)) throw ParameterError("s must lie in the open interval (0, 1)");
    if (n < 1) throw ParameterError("n must be >= 1");
}

double standard_normal(CounterRng& rng) {
    const double u1 = 1.0 - rng.uniform(); // (0, 1]
    const double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

WeightedDag random_dag(Index p, double s, CounterRng& rng) {
    SimConfig{p, s, 1, 0}.validate();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(p, p);
    for (Index j = 1; j < p; ++j)
        for (Index i = 0; i < j; ++i)
            if (rng.uniform() < s) a(j, i) = 1.0;
    for (Index j = 1; j < p; ++j)
        for (Index i = 0; i < j; ++i)
            if (a(j, i) != 0.0) a(j, i) = 0.1 + 0.9 * rng.uniform();
    return WeightedDag(std::move(a));
}

Dataset sample_data(const WeightedDag& dag, long n, CounterRng& rng) {
    if (n < 1) throw ParameterError("n must be >= 1");
    const Index p = dag.size();
    // Noise is drawn row by row; column r of eps holds observation r.
    Eigen::MatrixXd eps(p, n);
    for (long r = 0; r < n; ++r)
        for (Index i = 0; i < p; ++i) eps(i, r) = standard_normal(rng);
    // (I - A) x = eps is exactly the forward recursion x_i = sum_{k<i} A_ik x_k + eps_i.
    const Eigen::MatrixXd i_minus_a = Eigen::MatrixXd::Identity(p, p) - dag.weights();
    i_minus_a.triangularView<Eigen::UnitLower>().solveInPlace(eps);
    return eps.transpose();
}

SimulatedInstance simulate(const SimConfig& config) {
    config.validate();
    CounterRng rng(config.seed);
    WeightedDag dag = random_dag(config.p, config.s, rng);
    Dataset data = sample_data(dag, config.n, rng);
    return {std::move(dag), std::move(data)};
}

namespace {

void put_number(std::ostream& out, double v) {
    char buf[32];
    const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
    out.write(buf, len);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool parse_double(std::string_view field, double& out) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    if (field.empty()) return false;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    return ec == std::errc() && ptr == field.data() + field.size();
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

} // namespace

void write_dataset_csv(std::ostream& out, const Dataset& data, bool header) {
    if (header) {
        for (Eigen::Index c = 0; c < data.cols(); ++c) out << (c ? "," : "") << 'X' << (c + 1);
        out << '\n';
    }
    for (Eigen::Index r = 0; r < data.rows(); ++r) {
        for (Eigen::Index c = 0; c < data.cols(); ++c) {
            if (c) out << ',';
            put_number(out, data(r, c));
        }
        out << '\n';
    }
}

Dataset read_dataset_csv(std::istream& in) {
    std::vector<double> values;
    std::size_t cols = 0, rows = 0, lineno = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto fields = split(line, ',');
        if (rows == 0 && cols == 0) {
            double probe;
            if (!parse_double(fields.front(), probe)) {
                cols = fields.size(); // header row
                continue;
            }
        }
        if (cols == 0) cols = fields.size();
        if (fields.size() != cols)
            throw InputError("line " + std::to_string(lineno) + ": expected " + std::to_string(cols) +
                             " fields, got " + std::to_string(fields.size()));
        for (std::size_t c = 0; c < cols; ++c) {
            double v;
            if (!parse_double(fields[c], v))
                throw InputError("line " + std::to_string(lineno) + ", column " + std::to_string(c + 1) +
                                 ": not a number");
            if (!std::isfinite(v))
                throw InputError("line " + std::to_string(lineno) + ", column " + std::to_string(c + 1) +
                                 ": non-finite value");
            values.push_back(v);
        }
        ++rows;
    }
    if (rows == 0) throw InputError("no data rows");
    Dataset data(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = values[r * cols + c];
    return data;
}

void write_weight_matrix(std::ostream& out, const WeightedDag& dag) {
    const auto& w = dag.weights();
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
        for (Eigen::Index c = 0; c < w.cols(); ++c) {
            if (c) out << ' ';
            put_number(out, w(r, c));
        }
        out << '\n';
    }
}

WeightedDag read_weight_matrix(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::vector<double> row;
        std::string_view rest = line;
        while (true) {
            rest = trim(rest);
            if (rest.empty()) break;
            const auto end = rest.find_first_of(" \t");
            const auto token = rest.substr(0, end);
            double v;
            if (!parse_double(token, v))
                throw InputError("weights line " + std::to_string(lineno) + ": not a number");
            row.push_back(v);
            if (end == std::string_view::npos) break;
            rest.remove_prefix(end);
        }
        rows.push_back(std::move(row));
    }
    const std::size_t p = rows.size();
    if (p == 0) throw InputError("empty weight matrix");
    Eigen::MatrixXd w(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
    for (std::size_t r = 0; r < p; ++r) {
        if (rows[r].size() != p)
            throw InputError("weights row " + std::to_string(r + 1) + " has " + std::to_string(rows[r].size()) +
                             " entries, expected " + std::to_string(p));
        for (std::size_t c = 0; c < p; ++c)
            w(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
    return WeightedDag(std::move(w));
}

} // namespace pcskel

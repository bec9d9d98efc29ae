#include "pcskel/graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "pcskel/error.hpp"

namespace pcskel {

WeightedDag::WeightedDag(Eigen::MatrixXd weights) : weights_(std::move(weights)) {
    if (weights_.rows() != weights_.cols() || weights_.rows() < 1)
        throw InputError("weight matrix must be square with p >= 1");
    for (Index j = 0; j < weights_.rows(); ++j) {
        for (Index i = 0; i < weights_.cols(); ++i) {
            const double w = weights_(j, i);
            if (!std::isfinite(w))
                throw InputError("non-finite weight at row " + std::to_string(j + 1));
            if (i >= j && w != 0.0)
                throw InputError("weight matrix must be strictly lower triangular (entry " +
                                 std::to_string(j + 1) + "," + std::to_string(i + 1) + ")");
        }
    }
}

WeightedDag WeightedDag::empty(Index p) {
    if (p < 1) throw ParameterError("p must be >= 1");
    return WeightedDag(Eigen::MatrixXd::Zero(p, p));
}

std::size_t WeightedDag::edge_count() const {
    return static_cast<std::size_t>((weights_.array() != 0.0).count());
}

UndirectedGraph::UndirectedGraph(Index p) {
    if (p < 0) throw ParameterError("negative vertex count");
    adj_.resize(static_cast<std::size_t>(p));
}

UndirectedGraph UndirectedGraph::complete(Index p) {
    UndirectedGraph g(p);
    for (Index v = 0; v < p; ++v) {
        auto& nb = g.adj_[static_cast<std::size_t>(v)];
        nb.reserve(static_cast<std::size_t>(p - 1));
        for (Index u = 0; u < p; ++u)
            if (u != v) nb.push_back(u);
    }
    return g;
}

UndirectedGraph UndirectedGraph::from_edges(Index p, const std::vector<std::pair<Index, Index>>& edges) {
    UndirectedGraph g(p);
    for (auto [a, b] : edges) g.add_edge(a, b);
    return g;
}

void UndirectedGraph::check_vertex(Index v) const {
    if (v < 0 || v >= size()) throw InputError("vertex " + std::to_string(v) + " out of range");
}

bool UndirectedGraph::adjacent(Index a, Index b) const {
    check_vertex(a);
    check_vertex(b);
    const auto& nb = adj_[static_cast<std::size_t>(a)];
    return std::binary_search(nb.begin(), nb.end(), b);
}

std::size_t UndirectedGraph::edge_count() const {
    std::size_t total = 0;
    for (const auto& nb : adj_) total += nb.size();
    return total / 2;
}

bool UndirectedGraph::add_edge(Index a, Index b) {
    check_vertex(a);
    check_vertex(b);
    if (a == b) throw InputError("self-loop on vertex " + std::to_string(a + 1));
    auto insert = [](VertexSet& nb, Index v) {
        auto it = std::lower_bound(nb.begin(), nb.end(), v);
        if (it != nb.end() && *it == v) return false;
        nb.insert(it, v);
        return true;
    };
    if (!insert(adj_[static_cast<std::size_t>(a)], b)) return false;
    insert(adj_[static_cast<std::size_t>(b)], a);
    return true;
}

bool UndirectedGraph::remove_edge(Index a, Index b) {
    check_vertex(a);
    check_vertex(b);
    auto erase = [](VertexSet& nb, Index v) {
        auto it = std::lower_bound(nb.begin(), nb.end(), v);
        if (it == nb.end() || *it != v) return false;
        nb.erase(it);
        return true;
    };
    if (!erase(adj_[static_cast<std::size_t>(a)], b)) return false;
    erase(adj_[static_cast<std::size_t>(b)], a);
    return true;
}

std::vector<std::pair<Index, Index>> UndirectedGraph::edges() const {
    std::vector<std::pair<Index, Index>> out;
    for (Index i = 0; i < size(); ++i)
        for (Index j : adj_[static_cast<std::size_t>(i)])
            if (i < j) out.emplace_back(i, j);
    return out;
}

UndirectedGraph skeleton_of_dag(const WeightedDag& dag) {
    const Index p = dag.size();
    UndirectedGraph g(p);
    const auto& w = dag.weights();
    for (Index j = 0; j < p; ++j)
        for (Index i = 0; i < j; ++i)
            if (w(j, i) != 0.0 || w(i, j) != 0.0) g.add_edge(i, j);
    return g;
}

UndirectedGraph complete_graph(Index p) {
    if (p < 1) throw ParameterError("complete_graph requires p >= 1");
    return UndirectedGraph::complete(p);
}

std::size_t max_degree(const UndirectedGraph& g) {
    std::size_t q = 0;
    for (Index v = 0; v < g.size(); ++v) q = std::max(q, g.degree(v));
    return q;
}

Eigen::MatrixXd true_covariance(const WeightedDag& dag) {
    const Index p = dag.size();
    const Eigen::MatrixXd i_minus_a = Eigen::MatrixXd::Identity(p, p) - dag.weights();
    // B = (I - A)^{-1} by forward substitution; X = B * eps.
    const Eigen::MatrixXd b =
        i_minus_a.triangularView<Eigen::UnitLower>().solve(Eigen::MatrixXd::Identity(p, p));
    Eigen::MatrixXd sigma = b * b.transpose();
    // Exact symmetry regardless of summation order.
    return (sigma + sigma.transpose()) / 2.0;
}

void write_edge_list(std::ostream& out, const UndirectedGraph& g) {
    for (auto [i, j] : g.edges()) out << (i + 1) << '\t' << (j + 1) << '\n';
}

UndirectedGraph read_edge_list(std::istream& in, Index p) {
    UndirectedGraph g(p);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        long a = 0, b = 0;
        if (!(ls >> a >> b) || a < 1 || b < 1 || a > p || b > p || a == b)
            throw InputError("bad edge on line " + std::to_string(lineno));
        g.add_edge(static_cast<Index>(a - 1), static_cast<Index>(b - 1));
    }
    return g;
}

} // namespace pcskel

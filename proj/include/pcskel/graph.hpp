#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace pcskel {

using Index = int;
using VertexSet = std::vector<Index>;

/// DAG over vertices 0..p-1 whose topological order is the index order.
/// weights(j, i) != 0 encodes the edge i -> j with that weight, i < j.
class WeightedDag {
public:
    explicit WeightedDag(Eigen::MatrixXd weights);

    static WeightedDag empty(Index p);

    Index size() const noexcept { return static_cast<Index>(weights_.rows()); }
    const Eigen::MatrixXd& weights() const noexcept { return weights_; }
    bool has_edge(Index from, Index to) const { return weights_(to, from) != 0.0; }
    std::size_t edge_count() const;

private:
    Eigen::MatrixXd weights_;
};

/// Undirected simple graph stored as sorted per-vertex neighbor lists.
class UndirectedGraph {
public:
    UndirectedGraph() = default;
    explicit UndirectedGraph(Index p);

    static UndirectedGraph complete(Index p);
    static UndirectedGraph from_edges(Index p, const std::vector<std::pair<Index, Index>>& edges);

    Index size() const noexcept { return static_cast<Index>(adj_.size()); }
    const VertexSet& neighbors(Index v) const { return adj_.at(static_cast<std::size_t>(v)); }
    bool adjacent(Index a, Index b) const;
    std::size_t degree(Index v) const { return neighbors(v).size(); }
    std::size_t edge_count() const;

    /// Returns false if the edge was already present (or a == b is rejected).
    bool add_edge(Index a, Index b);
    /// Returns false if the edge was absent.
    bool remove_edge(Index a, Index b);

    /// Edges {i, j} with i < j in lexicographic order.
    std::vector<std::pair<Index, Index>> edges() const;

    bool operator==(const UndirectedGraph&) const = default;

private:
    void check_vertex(Index v) const;

    std::vector<VertexSet> adj_;
};

UndirectedGraph skeleton_of_dag(const WeightedDag& dag);

UndirectedGraph complete_graph(Index p);

/// q = max_j |adj(j)|, 0 for a graph without edges.
std::size_t max_degree(const UndirectedGraph& g);

/// Exact covariance (I - A)^{-1} (I - A)^{-T} of the linear SEM with unit-variance noise.
Eigen::MatrixXd true_covariance(const WeightedDag& dag);

/// Tab separated, 1-indexed, i < j, sorted.
void write_edge_list(std::ostream& out, const UndirectedGraph& g);
UndirectedGraph read_edge_list(std::istream& in, Index p);

} // namespace pcskel

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace sgcn {

using NodeId = std::uint32_t;

/// Dense node signal matrix: row i holds the values at node i, one column per
/// feature or channel.
using SignalMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Edge {
    NodeId u;
    NodeId v;
    double weight = 1.0;
};

/// Undirected, positively weighted graph in CSR form. Both directions of every
/// edge are stored, neighbor lists are sorted, and every node has positive
/// degree (isolated nodes carry a unit self-loop). Immutable once built.
class Graph {
public:
    Graph() = default;

    std::size_t node_count() const noexcept { return degrees_.size(); }

    /// Undirected edges between distinct nodes (self-loops excluded).
    std::size_t edge_count() const noexcept { return edge_count_; }

    std::size_t self_loop_count() const noexcept { return self_loops_; }

    std::span<const std::size_t> row_offsets() const noexcept { return row_offsets_; }
    std::span<const NodeId> col_ids() const noexcept { return col_ids_; }
    std::span<const double> weights() const noexcept { return weights_; }

    std::span<const NodeId> neighbors(NodeId u) const noexcept {
        return {col_ids_.data() + row_offsets_[u], row_offsets_[u + 1] - row_offsets_[u]};
    }
    std::span<const double> neighbor_weights(NodeId u) const noexcept {
        return {weights_.data() + row_offsets_[u], row_offsets_[u + 1] - row_offsets_[u]};
    }

    /// Weighted degree d_i = sum_j W[i, j].
    double degree(NodeId u) const noexcept { return degrees_[u]; }
    std::span<const double> degrees() const noexcept { return degrees_; }

    /// Edges with u < v, in CSR order. Self-loops are not included.
    std::vector<Edge> edges() const;

private:
    friend Graph build_graph(std::size_t n, std::span<const Edge> edges);

    std::vector<std::size_t> row_offsets_{0};
    std::vector<NodeId> col_ids_;
    std::vector<double> weights_;
    std::vector<double> degrees_;
    std::size_t edge_count_ = 0;
    std::size_t self_loops_ = 0;
};

/// Builds a symmetric CSR graph from an undirected edge list (each edge once).
/// Nodes left without neighbors get a self-loop of weight 1.
/// Throws std::invalid_argument on out-of-range ids, self-loops, duplicate
/// edges, or non-finite / non-positive weights.
Graph build_graph(std::size_t n, std::span<const Edge> edges);

/// Unweighted cycle 0 ~ 1 ~ ... ~ m-1 ~ 0. Requires m >= 3.
Graph make_cyclic(std::size_t m);

/// beta-regular bipartite graph with parts {0..k-1} and {k..2k-1}, where
/// node i of the first part connects to k + (i + j) mod k for j < beta.
Graph make_bipartite_regular(std::size_t part_size, std::size_t beta);

/// Cycles laid out in index order, consecutive cycles joined by a single
/// bottleneck edge.
struct ChainedCycles {
    Graph graph;
    /// First node id of each cycle; cycle c owns [cycle_start[c], cycle_start[c] + lengths[c]).
    std::vector<NodeId> cycle_start;
    std::vector<std::size_t> lengths;
    /// Cycle index of every node.
    std::vector<std::size_t> cycle_of;
};

/// Cycle c occupies a contiguous id range. Its entry hub (towards cycle c-1)
/// is its first node; its exit hub (towards cycle c+1) sits floor(len/2) steps
/// further on, which is the farthest node, taking the lower index on odd
/// cycles. With closed = true the last cycle is also joined back to the first.
/// Requires >= 2 cycles, each of length >= 3.
ChainedCycles make_chained_cycles(std::span<const std::size_t> lengths, bool closed = false);

/// Proper 2-coloring by BFS, or an empty vector if the graph is not bipartite.
std::vector<int> two_coloring(const Graph& g);

/// Hop distances from source (unreachable nodes get SIZE_MAX).
std::vector<std::size_t> bfs_distances(const Graph& g, NodeId source);

} // namespace sgcn

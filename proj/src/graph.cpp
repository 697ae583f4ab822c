#include "sgcn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>

namespace sgcn {

namespace {

std::string pair_str(NodeId u, NodeId v) { return "(" + std::to_string(u) + ", " + std::to_string(v) + ")"; }

} // namespace

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (NodeId u = 0; u < node_count(); ++u) {
        auto nb = neighbors(u);
        auto w = neighbor_weights(u);
        for (std::size_t i = 0; i < nb.size(); ++i)
            if (u < nb[i]) out.push_back({u, nb[i], w[i]});
    }
    return out;
}

Graph build_graph(std::size_t n, std::span<const Edge> edges) {
    if (n > std::numeric_limits<NodeId>::max()) throw std::invalid_argument("build_graph: too many nodes");

    std::vector<std::size_t> counts(n, 0);
    for (const Edge& e : edges) {
        if (e.u >= n || e.v >= n)
            throw std::invalid_argument("build_graph: node id out of range in edge " + pair_str(e.u, e.v));
        if (e.u == e.v) throw std::invalid_argument("build_graph: self-loop edge " + pair_str(e.u, e.v));
        if (!std::isfinite(e.weight) || e.weight <= 0.0)
            throw std::invalid_argument("build_graph: weight must be finite and positive in edge " +
                                        pair_str(e.u, e.v));
        ++counts[e.u];
        ++counts[e.v];
    }

    Graph g;
    g.self_loops_ = static_cast<std::size_t>(std::count(counts.begin(), counts.end(), std::size_t{0}));
    g.row_offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) g.row_offsets_[i + 1] = g.row_offsets_[i] + std::max<std::size_t>(counts[i], 1);

    const std::size_t nnz = g.row_offsets_[n];
    std::vector<std::pair<NodeId, double>> entries(nnz);
    std::vector<std::size_t> fill(g.row_offsets_.begin(), g.row_offsets_.end() - 1);
    for (const Edge& e : edges) {
        entries[fill[e.u]++] = {e.v, e.weight};
        entries[fill[e.v]++] = {e.u, e.weight};
    }
    for (NodeId i = 0; i < n; ++i)
        if (counts[i] == 0) entries[fill[i]++] = {i, 1.0};

    g.col_ids_.resize(nnz);
    g.weights_.resize(nnz);
    g.degrees_.assign(n, 0.0);
    for (NodeId i = 0; i < n; ++i) {
        auto first = entries.begin() + static_cast<std::ptrdiff_t>(g.row_offsets_[i]);
        auto last = entries.begin() + static_cast<std::ptrdiff_t>(g.row_offsets_[i + 1]);
        std::sort(first, last, [](const auto& a, const auto& b) { return a.first < b.first; });
        for (auto it = first; it != last; ++it) {
            if (it != first && it->first == (it - 1)->first)
                throw std::invalid_argument("build_graph: duplicate edge " + pair_str(i, it->first));
            const std::size_t k = static_cast<std::size_t>(it - entries.begin());
            g.col_ids_[k] = it->first;
            g.weights_[k] = it->second;
            g.degrees_[i] += it->second;
        }
    }
    g.edge_count_ = edges.size();
    return g;
}

Graph make_cyclic(std::size_t m) {
    if (m < 3) throw std::invalid_argument("make_cyclic: need at least 3 nodes, got " + std::to_string(m));
    std::vector<Edge> edges;
    edges.reserve(m);
    for (std::size_t i = 0; i < m; ++i)
        edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>((i + 1) % m), 1.0});
    return build_graph(m, edges);
}

Graph make_bipartite_regular(std::size_t part_size, std::size_t beta) {
    if (beta < 1 || beta > part_size)
        throw std::invalid_argument("make_bipartite_regular: beta must lie in [1, part_size], got beta=" +
                                    std::to_string(beta) + ", part_size=" + std::to_string(part_size));
    std::vector<Edge> edges;
    edges.reserve(part_size * beta);
    for (std::size_t i = 0; i < part_size; ++i)
        for (std::size_t j = 0; j < beta; ++j)
            edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(part_size + (i + j) % part_size), 1.0});
    return build_graph(2 * part_size, edges);
}

ChainedCycles make_chained_cycles(std::span<const std::size_t> lengths, bool closed) {
    if (lengths.size() < 2) throw std::invalid_argument("make_chained_cycles: need at least 2 cycles");
    for (std::size_t len : lengths)
        if (len < 3) throw std::invalid_argument("make_chained_cycles: cycle length " + std::to_string(len) + " < 3");

    ChainedCycles out;
    out.lengths.assign(lengths.begin(), lengths.end());
    std::vector<Edge> edges;
    NodeId start = 0;
    for (std::size_t c = 0; c < lengths.size(); ++c) {
        out.cycle_start.push_back(start);
        const std::size_t len = lengths[c];
        for (std::size_t i = 0; i < len; ++i) {
            edges.push_back({static_cast<NodeId>(start + i), static_cast<NodeId>(start + (i + 1) % len), 1.0});
            out.cycle_of.push_back(c);
        }
        start += static_cast<NodeId>(len);
    }
    auto exit_hub = [&](std::size_t c) { return static_cast<NodeId>(out.cycle_start[c] + lengths[c] / 2); };
    for (std::size_t c = 0; c + 1 < lengths.size(); ++c) edges.push_back({exit_hub(c), out.cycle_start[c + 1], 1.0});
    if (closed) edges.push_back({out.cycle_start[0], exit_hub(lengths.size() - 1), 1.0});

    out.graph = build_graph(start, edges);
    return out;
}

std::vector<int> two_coloring(const Graph& g) {
    const std::size_t n = g.node_count();
    std::vector<int> color(n, -1);
    std::queue<NodeId> frontier;
    for (NodeId s = 0; s < n; ++s) {
        if (color[s] != -1) continue;
        color[s] = 0;
        frontier.push(s);
        while (!frontier.empty()) {
            const NodeId u = frontier.front();
            frontier.pop();
            for (NodeId v : g.neighbors(u)) {
                if (color[v] == -1) {
                    color[v] = 1 - color[u];
                    frontier.push(v);
                } else if (color[v] == color[u]) {
                    return {};
                }
            }
        }
    }
    return color;
}

std::vector<std::size_t> bfs_distances(const Graph& g, NodeId source) {
    std::vector<std::size_t> dist(g.node_count(), std::numeric_limits<std::size_t>::max());
    std::queue<NodeId> frontier;
    dist[source] = 0;
    frontier.push(source);
    while (!frontier.empty()) {
        const NodeId u = frontier.front();
        frontier.pop();
        for (NodeId v : g.neighbors(u)) {
            if (dist[v] == std::numeric_limits<std::size_t>::max()) {
                dist[v] = dist[u] + 1;
                frontier.push(v);
            }
        }
    }
    return dist;
}

} // namespace sgcn

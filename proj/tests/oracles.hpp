#pragma once

// Dense reference implementations. Everything here is built from plain
// matrices so it shares no code with the sparse library paths under test.

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sgcn/graph.hpp"
#include "sgcn/rng.hpp"

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline MatrixXd adjacency(const sgcn::Graph& g) {
    const auto n = static_cast<Eigen::Index>(g.node_count());
    MatrixXd w = MatrixXd::Zero(n, n);
    for (sgcn::NodeId u = 0; u < g.node_count(); ++u) {
        const auto nb = g.neighbors(u);
        const auto wt = g.neighbor_weights(u);
        for (std::size_t k = 0; k < nb.size(); ++k) w(u, nb[k]) = wt[k];
    }
    return w;
}

/// Dense adjacency straight from an edge list (no self-loop patching).
inline MatrixXd adjacency(std::size_t n, const std::vector<sgcn::Edge>& edges) {
    MatrixXd w = MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (const auto& e : edges) w(e.u, e.v) = w(e.v, e.u) = e.weight;
    return w;
}

inline VectorXd degrees(const MatrixXd& w) { return w.rowwise().sum(); }

inline MatrixXd identity(const MatrixXd& w) { return MatrixXd::Identity(w.rows(), w.cols()); }

/// 1/2 (I + W D^-1)
inline MatrixXd lazy_walk(const MatrixXd& w) {
    return 0.5 * (identity(w) + w * degrees(w).cwiseInverse().asDiagonal());
}

/// W D^-1
inline MatrixXd nonlazy_walk(const MatrixXd& w) { return w * degrees(w).cwiseInverse().asDiagonal(); }

/// Dt^-1/2 (I + W) Dt^-1/2, Dt = D + I
inline MatrixXd renorm_propagation(const MatrixXd& w) {
    const VectorXd s = (degrees(w).array() + 1.0).rsqrt().matrix();
    return s.asDiagonal() * (identity(w) + w) * s.asDiagonal();
}

/// D^-1/2 W D^-1/2
inline MatrixXd sym_adjacency(const MatrixXd& w) {
    const VectorXd s = degrees(w).array().rsqrt().matrix();
    return s.asDiagonal() * w * s.asDiagonal();
}

inline MatrixXd laplacian(const MatrixXd& w) { return identity(w) - sym_adjacency(w); }

inline MatrixXd gcn_filter(const MatrixXd& w, double theta) { return theta * (identity(w) + sym_adjacency(w)); }

inline MatrixXd residual(const MatrixXd& w, double alpha) {
    return (identity(w) + alpha * nonlazy_walk(w)) / (alpha + 1.0);
}

inline MatrixXd power(const MatrixXd& m, std::size_t k) {
    MatrixXd out = identity(m);
    for (std::size_t i = 0; i < k; ++i) out = out * m;
    return out;
}

inline MatrixXd wavelet(const MatrixXd& p, std::size_t k) {
    if (k == 0) return identity(p) - p;
    return power(p, std::size_t{1} << (k - 1)) - power(p, std::size_t{1} << k);
}

/// U_p x with the dense wavelets, path innermost first.
inline MatrixXd scatter(const MatrixXd& p, const std::vector<std::size_t>& path, const MatrixXd& x) {
    MatrixXd cur = wavelet(p, path[0]) * x;
    for (std::size_t i = 1; i < path.size(); ++i) cur = wavelet(p, path[i]) * cur.cwiseAbs();
    return cur;
}

/// Erdos-Renyi style graph with random positive weights; isolated nodes are
/// self-looped by build_graph.
inline std::vector<sgcn::Edge> random_edges(std::size_t n, double p, sgcn::CounterRng& rng, bool weighted = true) {
    std::vector<sgcn::Edge> edges;
    for (sgcn::NodeId u = 0; u < n; ++u)
        for (sgcn::NodeId v = u + 1; v < n; ++v)
            if (rng.uniform() < p) edges.push_back({u, v, weighted ? rng.uniform(0.5, 2.0) : 1.0});
    return edges;
}

inline sgcn::SignalMatrix random_signal(std::size_t n, std::size_t d, sgcn::CounterRng& rng, double lo = -1.0, double hi = 1.0) {
    sgcn::SignalMatrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform(lo, hi);
    return x;
}

inline double max_abs(const MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("sgcn_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace oracle

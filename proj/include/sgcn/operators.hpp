#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "sgcn/graph.hpp"

namespace sgcn {

enum class DiffusionKind {
    LazyWalk,     ///< P = 1/2 (I + W D^-1)
    RenormProp,   ///< A = Dt^-1/2 (I + W) Dt^-1/2, Dt = D + I
    NonLazyWalk,  ///< R = W D^-1
    ResidualConv, ///< A_res(alpha) = (I + alpha W D^-1) / (alpha + 1)
    SymNormAdj,   ///< D^-1/2 W D^-1/2
};

/// A sparse linear operator over a graph, applied to signals without ever
/// being materialized. Holds a reference to the graph, which must outlive it.
/// Read-only after construction and safe to share between threads.
class DiffusionPlan {
public:
    DiffusionPlan(const Graph& g, DiffusionKind kind, double alpha = 0.0);

    const Graph& graph() const noexcept { return *graph_; }
    DiffusionKind kind() const noexcept { return kind_; }
    double alpha() const noexcept { return alpha_; }
    bool is_transposed() const noexcept { return transposed_; }
    bool is_symmetric() const noexcept;

    /// Plan applying the transpose of this operator.
    DiffusionPlan transposed() const;

    /// One sparse sweep: returns M x.
    SignalMatrix apply(const SignalMatrix& x) const;

    /// Single entry M[i, j], looked up through the sparse structure.
    double entry(NodeId i, NodeId j) const;

private:
    const Graph* graph_;
    DiffusionKind kind_;
    double alpha_;
    bool transposed_ = false;
    // M[i, j] = diag[i] * [i == j] + row_scale[i] * W[i, j] * col_scale[j];
    // transposing swaps row_scale and col_scale.
    std::vector<double> diag_;
    std::vector<double> row_scale_;
    std::vector<double> col_scale_;
};

DiffusionPlan lazy_walk(const Graph& g);
DiffusionPlan nonlazy_walk(const Graph& g);
/// Renormalized GCN propagation matrix A.
DiffusionPlan renorm_propagation(const Graph& g);
/// Throws std::invalid_argument for negative or non-finite alpha.
DiffusionPlan residual_plan(const Graph& g, double alpha);

/// Lazily computed powers M^k x of one signal batch. Every computed power is
/// kept, so the dyadic sequence x, Mx, M^2x, M^4x, ..., M^(2^K)x costs exactly
/// 2^K sweeps in total. Populate from a single thread.
class DiffusionCache {
public:
    DiffusionCache(const DiffusionPlan& plan, SignalMatrix x);

    /// M^k x, extending from the largest cached exponent not above k.
    const SignalMatrix& power(std::size_t k);

    /// Sparse sweeps performed so far.
    std::size_t sweeps() const noexcept { return sweeps_; }

    const DiffusionPlan& plan() const noexcept { return *plan_; }

private:
    const DiffusionPlan* plan_;
    std::map<std::size_t, SignalMatrix> powers_;
    std::size_t sweeps_ = 0;
};

/// theta (I + D^-1/2 W D^-1/2) x.
SignalMatrix gcn_filter(const Graph& g, double theta, const SignalMatrix& x);

/// M^k x by k repeated sweeps; k = 0 returns x.
SignalMatrix apply_power(const DiffusionPlan& plan, std::size_t k, const SignalMatrix& x);

/// Wavelet at scale k: Psi_0 = I - P, Psi_k = P^(2^(k-1)) - P^(2^k).
SignalMatrix apply_wavelet(const DiffusionPlan& plan, std::size_t k, const SignalMatrix& x);
SignalMatrix apply_wavelet(DiffusionCache& cache, std::size_t k);

/// Low-pass Phi_K x = P^(2^K) x.
SignalMatrix apply_lowpass(const DiffusionPlan& plan, std::size_t K, const SignalMatrix& x);
SignalMatrix apply_lowpass(DiffusionCache& cache, std::size_t K);

/// Psi_0 x, ..., Psi_K x followed by Phi_K x, sharing one diffusion cache.
std::vector<SignalMatrix> filter_bank(const DiffusionPlan& plan, std::size_t K, const SignalMatrix& x);

/// A_res(alpha) x. Throws std::invalid_argument for negative alpha.
SignalMatrix residual_conv(const Graph& g, double alpha, const SignalMatrix& x);

} // namespace sgcn

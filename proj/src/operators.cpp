#include "sgcn/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sgcn/parallel.hpp"

namespace sgcn {

namespace {

void check_rows(const Graph& g, const SignalMatrix& x, const char* who) {
    if (static_cast<std::size_t>(x.rows()) != g.node_count())
        throw std::invalid_argument(std::string(who) + ": signal has " + std::to_string(x.rows()) +
                                    " rows, graph has " + std::to_string(g.node_count()) + " nodes");
}

} // namespace

DiffusionPlan::DiffusionPlan(const Graph& g, DiffusionKind kind, double alpha)
    : graph_(&g), kind_(kind), alpha_(alpha) {
    const std::size_t n = g.node_count();
    diag_.assign(n, 0.0);
    row_scale_.assign(n, 1.0);
    col_scale_.assign(n, 1.0);
    auto d = g.degrees();
    switch (kind) {
    case DiffusionKind::LazyWalk:
        for (std::size_t i = 0; i < n; ++i) {
            diag_[i] = 0.5;
            row_scale_[i] = 0.5;
            col_scale_[i] = 1.0 / d[i];
        }
        break;
    case DiffusionKind::NonLazyWalk:
        for (std::size_t i = 0; i < n; ++i) col_scale_[i] = 1.0 / d[i];
        break;
    case DiffusionKind::RenormProp:
        for (std::size_t i = 0; i < n; ++i) {
            const double dt = d[i] + 1.0;
            diag_[i] = 1.0 / dt;
            row_scale_[i] = col_scale_[i] = 1.0 / std::sqrt(dt);
        }
        break;
    case DiffusionKind::ResidualConv:
        if (!(alpha >= 0.0) || !std::isfinite(alpha))
            throw std::invalid_argument("residual convolution: alpha must be finite and >= 0, got " +
                                        std::to_string(alpha));
        for (std::size_t i = 0; i < n; ++i) {
            diag_[i] = 1.0 / (alpha + 1.0);
            row_scale_[i] = alpha / (alpha + 1.0);
            col_scale_[i] = 1.0 / d[i];
        }
        break;
    case DiffusionKind::SymNormAdj:
        for (std::size_t i = 0; i < n; ++i) row_scale_[i] = col_scale_[i] = 1.0 / std::sqrt(d[i]);
        break;
    }
}

bool DiffusionPlan::is_symmetric() const noexcept {
    if (kind_ == DiffusionKind::RenormProp || kind_ == DiffusionKind::SymNormAdj) return true;
    // W is symmetric, so M is iff row_scale[i] col_scale[j] is symmetric on every edge.
    const auto offsets = graph_->row_offsets();
    const auto cols = graph_->col_ids();
    for (std::size_t i = 0; i + 1 < offsets.size(); ++i)
        for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k)
            if (row_scale_[i] * col_scale_[cols[k]] != row_scale_[cols[k]] * col_scale_[i]) return false;
    return true;
}

DiffusionPlan DiffusionPlan::transposed() const {
    DiffusionPlan t = *this;
    t.transposed_ = !transposed_;
    std::swap(t.row_scale_, t.col_scale_);
    return t;
}

SignalMatrix DiffusionPlan::apply(const SignalMatrix& x) const {
    check_rows(*graph_, x, "DiffusionPlan::apply");
    const Graph& g = *graph_;
    SignalMatrix y(x.rows(), x.cols());
    auto offsets = g.row_offsets();
    auto cols = g.col_ids();
    auto w = g.weights();
    parallel_rows(g.node_count(), [&](std::size_t begin, std::size_t end) {
        Eigen::RowVectorXd acc(x.cols());
        for (std::size_t i = begin; i < end; ++i) {
            acc.setZero();
            for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) acc.noalias() += (w[k] * col_scale_[cols[k]]) * x.row(cols[k]);
            y.row(static_cast<Eigen::Index>(i)).noalias() = diag_[i] * x.row(static_cast<Eigen::Index>(i)) + row_scale_[i] * acc;
        }
    });
    return y;
}

double DiffusionPlan::entry(NodeId i, NodeId j) const {
    double value = i == j ? diag_[i] : 0.0;
    auto nb = graph_->neighbors(i);
    auto it = std::lower_bound(nb.begin(), nb.end(), j);
    if (it != nb.end() && *it == j)
        value += row_scale_[i] * graph_->neighbor_weights(i)[static_cast<std::size_t>(it - nb.begin())] * col_scale_[j];
    return value;
}

DiffusionPlan lazy_walk(const Graph& g) { return DiffusionPlan(g, DiffusionKind::LazyWalk); }
DiffusionPlan nonlazy_walk(const Graph& g) { return DiffusionPlan(g, DiffusionKind::NonLazyWalk); }
DiffusionPlan renorm_propagation(const Graph& g) { return DiffusionPlan(g, DiffusionKind::RenormProp); }
DiffusionPlan residual_plan(const Graph& g, double alpha) { return DiffusionPlan(g, DiffusionKind::ResidualConv, alpha); }

DiffusionCache::DiffusionCache(const DiffusionPlan& plan, SignalMatrix x) : plan_(&plan) {
    check_rows(plan.graph(), x, "DiffusionCache");
    powers_.emplace(0, std::move(x));
}

const SignalMatrix& DiffusionCache::power(std::size_t k) {
    auto it = powers_.upper_bound(k);
    --it; // exponent 0 is always present
    if (it->first == k) return it->second;
    SignalMatrix cur = plan_->apply(it->second);
    ++sweeps_;
    for (std::size_t e = it->first + 1; e < k; ++e) {
        cur = plan_->apply(cur);
        ++sweeps_;
    }
    return powers_.emplace(k, std::move(cur)).first->second;
}

SignalMatrix gcn_filter(const Graph& g, double theta, const SignalMatrix& x) {
    check_rows(g, x, "gcn_filter");
    const DiffusionPlan s(g, DiffusionKind::SymNormAdj);
    return theta * (x + s.apply(x));
}

SignalMatrix apply_power(const DiffusionPlan& plan, std::size_t k, const SignalMatrix& x) {
    check_rows(plan.graph(), x, "apply_power");
    SignalMatrix cur = x;
    for (std::size_t i = 0; i < k; ++i) cur = plan.apply(cur);
    return cur;
}

SignalMatrix apply_wavelet(DiffusionCache& cache, std::size_t k) {
    if (k == 0) {
        SignalMatrix out = cache.power(0);
        out -= cache.power(1);
        return out;
    }
    const std::size_t half = std::size_t{1} << (k - 1);
    SignalMatrix out = cache.power(half);
    out -= cache.power(2 * half);
    return out;
}

SignalMatrix apply_wavelet(const DiffusionPlan& plan, std::size_t k, const SignalMatrix& x) {
    DiffusionCache cache(plan, x);
    return apply_wavelet(cache, k);
}

SignalMatrix apply_lowpass(DiffusionCache& cache, std::size_t K) { return cache.power(std::size_t{1} << K); }

SignalMatrix apply_lowpass(const DiffusionPlan& plan, std::size_t K, const SignalMatrix& x) {
    DiffusionCache cache(plan, x);
    return apply_lowpass(cache, K);
}

std::vector<SignalMatrix> filter_bank(const DiffusionPlan& plan, std::size_t K, const SignalMatrix& x) {
    DiffusionCache cache(plan, x);
    std::vector<SignalMatrix> bank;
    bank.reserve(K + 2);
    for (std::size_t k = 0; k <= K; ++k) bank.push_back(apply_wavelet(cache, k));
    bank.push_back(apply_lowpass(cache, K));
    return bank;
}

SignalMatrix residual_conv(const Graph& g, double alpha, const SignalMatrix& x) {
    return residual_plan(g, alpha).apply(x);
}

} // namespace sgcn

#include "sgcn/scattering.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace sgcn {

namespace {

void require_lazy_walk(const DiffusionPlan& plan, const char* who) {
    if (plan.kind() != DiffusionKind::LazyWalk) throw std::invalid_argument(std::string(who) + ": needs a lazy-walk plan");
}

SignalMatrix sign_of(const SignalMatrix& z) {
    return z.unaryExpr([](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); });
}

} // namespace

ScatteringPath::ScatteringPath(std::vector<std::size_t> scales) : scales_(std::move(scales)) {
    if (scales_.empty()) throw std::invalid_argument("scattering path must contain at least one scale");
    for (std::size_t k : scales_)
        if (k > kMaxScale)
            throw std::invalid_argument("scattering scale " + std::to_string(k) + " exceeds maximum " +
                                        std::to_string(kMaxScale));
}

ScatteringPath ScatteringPath::parse(std::string_view text) {
    std::vector<std::size_t> scales;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        std::string_view token = text.substr(pos, comma - pos);
        while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
        while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
        std::size_t value = 0;
        auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (token.empty() || ec != std::errc{} || end != token.data() + token.size())
            throw std::invalid_argument("bad scattering path '" + std::string(text) + "'");
        scales.push_back(value);
        pos = comma + 1;
    }
    return ScatteringPath(std::move(scales));
}

std::size_t ScatteringPath::max_scale() const noexcept { return *std::max_element(scales_.begin(), scales_.end()); }

std::string ScatteringPath::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < scales_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(scales_[i]);
    }
    return out;
}

SignalMatrix scatter_node(const DiffusionPlan& plan, const ScatteringPath& path, const SignalMatrix& x) {
    require_lazy_walk(plan, "scatter_node");
    SignalMatrix cur = x;
    const auto& scales = path.scales();
    for (std::size_t i = 0; i < scales.size(); ++i) {
        cur = apply_wavelet(plan, scales[i], cur);
        if (i + 1 < scales.size()) cur = cur.cwiseAbs();
    }
    return cur;
}

SignalMatrix scatter_node_vjp(const DiffusionPlan& plan, const DiffusionPlan& transposed, const ScatteringPath& path,
                              const SignalMatrix& x, const SignalMatrix& upstream) {
    require_lazy_walk(plan, "scatter_node_vjp");
    if (!transposed.is_transposed() || transposed.kind() != DiffusionKind::LazyWalk)
        throw std::invalid_argument("scatter_node_vjp: second plan must be the transposed lazy walk");
    const auto& scales = path.scales();

    // Pre-activation signals entering each interior |.|.
    std::vector<SignalMatrix> pre;
    pre.reserve(scales.size());
    SignalMatrix cur = x;
    for (std::size_t i = 0; i + 1 < scales.size(); ++i) {
        cur = apply_wavelet(plan, scales[i], cur);
        pre.push_back(cur);
        cur = cur.cwiseAbs();
    }

    SignalMatrix grad = upstream;
    for (std::size_t i = scales.size(); i-- > 0;) {
        grad = apply_wavelet(transposed, scales[i], grad);
        if (i > 0) grad = grad.cwiseProduct(sign_of(pre[i - 1]));
    }
    return grad;
}

double scatter_graph_moments(const DiffusionPlan& plan, const ScatteringPath& path, int q, const SignalMatrix& x) {
    if (q < 1) throw std::invalid_argument("scatter_graph_moments: moment order must be >= 1, got " + std::to_string(q));
    if (x.cols() != 1) throw std::invalid_argument("scatter_graph_moments: expects a single-column signal");
    const SignalMatrix u = scatter_node(plan, path, x);
    double total = 0.0;
    for (Eigen::Index i = 0; i < u.rows(); ++i) total += std::pow(std::abs(u(i, 0)), q);
    return total;
}

} // namespace sgcn

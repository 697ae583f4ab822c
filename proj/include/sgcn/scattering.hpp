#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "sgcn/operators.hpp"

namespace sgcn {

/// Largest wavelet scale accepted in paths.
inline constexpr std::size_t kMaxScale = 4;

/// Wavelet scales (k_1, ..., k_m), applied k_1 first.
class ScatteringPath {
public:
    /// Throws std::invalid_argument for an empty path or a scale above kMaxScale.
    explicit ScatteringPath(std::vector<std::size_t> scales);

    /// Parses a comma list such as "1" or "3,2" (innermost first).
    static ScatteringPath parse(std::string_view text);

    const std::vector<std::size_t>& scales() const noexcept { return scales_; }
    std::size_t order() const noexcept { return scales_.size(); }
    std::size_t max_scale() const noexcept;

    /// "3,2" style rendering, inverse of parse.
    std::string to_string() const;

    friend bool operator==(const ScatteringPath&, const ScatteringPath&) = default;

private:
    std::vector<std::size_t> scales_;
};

/// U_p x = Psi_{k_m} |Psi_{k_{m-1}} ... |Psi_{k_1} x| ... |. Absolute values
/// sit between wavelets only; the last wavelet's output is returned signed.
/// plan must be a lazy-walk plan.
SignalMatrix scatter_node(const DiffusionPlan& plan, const ScatteringPath& path, const SignalMatrix& x);

/// Vector-Jacobian product of scatter_node at x: returns J^T upstream.
/// transposed must be plan.transposed(). The derivative of |.| at 0 is taken as 0.
SignalMatrix scatter_node_vjp(const DiffusionPlan& plan, const DiffusionPlan& transposed, const ScatteringPath& path,
                              const SignalMatrix& x, const SignalMatrix& upstream);

/// S_{p,q} x = sum_i |U_p x[i]|^q for a single-column signal.
/// Throws std::invalid_argument for q < 1 or a multi-column signal.
double scatter_graph_moments(const DiffusionPlan& plan, const ScatteringPath& path, int q, const SignalMatrix& x);

} // namespace sgcn

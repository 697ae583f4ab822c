#include "sgcn/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "sgcn/operators.hpp"

namespace sgcn {

namespace {

void check_gammas(std::span<const double> gammas) {
    for (double c : gammas)
        if (!std::isfinite(c)) throw std::invalid_argument("poly_filter: non-finite coefficient");
}

} // namespace

Eigen::MatrixXd normalized_laplacian(const Graph& g, std::size_t guard) {
    const std::size_t n = g.node_count();
    if (n > guard)
        throw std::length_error("dense spectral tooling limited to " + std::to_string(guard) + " nodes, graph has " +
                                std::to_string(n));
    Eigen::MatrixXd lap = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (NodeId u = 0; u < n; ++u) {
        auto nb = g.neighbors(u);
        auto w = g.neighbor_weights(u);
        for (std::size_t k = 0; k < nb.size(); ++k)
            lap(u, nb[k]) -= w[k] / std::sqrt(g.degree(u) * g.degree(nb[k]));
    }
    return lap;
}

SpectralDecomposition decompose(const Eigen::MatrixXd& laplacian) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian);
    if (solver.info() != Eigen::Success) throw std::runtime_error("symmetric eigensolver did not converge");

    const Eigen::Index n = laplacian.rows();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    const Eigen::VectorXd& vals = solver.eigenvalues();
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return vals(a) < vals(b); });

    SpectralDecomposition dec;
    dec.eigenvalues.resize(n);
    dec.eigenvectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        dec.eigenvalues(i) = vals(order[static_cast<std::size_t>(i)]);
        dec.eigenvectors.col(i) = solver.eigenvectors().col(order[static_cast<std::size_t>(i)]);
    }
    return dec;
}

SpectralDecomposition decompose(const Graph& g, std::size_t guard) { return decompose(normalized_laplacian(g, guard)); }

Eigen::MatrixXd fourier(const SpectralDecomposition& dec, const Eigen::MatrixXd& x) {
    if (x.rows() != dec.eigenvectors.rows()) throw std::invalid_argument("fourier: dimension mismatch");
    return dec.eigenvectors.transpose() * x;
}

Eigen::MatrixXd inverse_fourier(const SpectralDecomposition& dec, const Eigen::MatrixXd& coeffs) {
    if (coeffs.rows() != dec.eigenvectors.cols()) throw std::invalid_argument("inverse_fourier: dimension mismatch");
    return dec.eigenvectors * coeffs;
}

SignalMatrix poly_filter(const Graph& g, std::span<const double> gammas, const SignalMatrix& x) {
    check_gammas(gammas);
    if (static_cast<std::size_t>(x.rows()) != g.node_count()) throw std::invalid_argument("poly_filter: dimension mismatch");
    if (gammas.empty()) return SignalMatrix::Zero(x.rows(), x.cols());

    const DiffusionPlan adj(g, DiffusionKind::SymNormAdj);
    SignalMatrix y = gammas.back() * x;
    for (std::size_t k = gammas.size() - 1; k-- > 0;) {
        SignalMatrix ly = y - adj.apply(y);
        y = ly + gammas[k] * x;
    }
    return y;
}

SignalMatrix poly_filter(const SpectralDecomposition& dec, std::span<const double> gammas, const SignalMatrix& x) {
    check_gammas(gammas);
    if (x.rows() != dec.eigenvectors.rows()) throw std::invalid_argument("poly_filter: dimension mismatch");
    Eigen::VectorXd response = Eigen::VectorXd::Zero(dec.eigenvalues.size());
    for (Eigen::Index i = 0; i < response.size(); ++i) {
        double acc = 0.0;
        for (std::size_t k = gammas.size(); k-- > 0;) acc = acc * dec.eigenvalues(i) + gammas[k];
        response(i) = acc;
    }
    const Eigen::MatrixXd xd = x;
    const Eigen::MatrixXd coeffs = response.asDiagonal() * fourier(dec, xd);
    return inverse_fourier(dec, coeffs);
}

} // namespace sgcn

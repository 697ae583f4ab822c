#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Core>

#include "sgcn/graph.hpp"

namespace sgcn {

/// Dense tooling refuses graphs larger than this unless told otherwise.
inline constexpr std::size_t kDenseNodeGuard = 2000;

/// I - D^-1/2 W D^-1/2 as a dense matrix. Throws std::length_error above the guard.
Eigen::MatrixXd normalized_laplacian(const Graph& g, std::size_t guard = kDenseNodeGuard);

/// Eigenpairs of the normalized Laplacian, eigenvalues ascending, eigenvectors
/// as orthonormal columns.
struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;

    std::size_t size() const noexcept { return static_cast<std::size_t>(eigenvalues.size()); }
};

SpectralDecomposition decompose(const Eigen::MatrixXd& laplacian);
SpectralDecomposition decompose(const Graph& g, std::size_t guard = kDenseNodeGuard);

/// Graph Fourier transform Q^T x (column-wise for multi-column signals).
Eigen::MatrixXd fourier(const SpectralDecomposition& dec, const Eigen::MatrixXd& x);
Eigen::MatrixXd inverse_fourier(const SpectralDecomposition& dec, const Eigen::MatrixXd& coeffs);

/// sum_k gammas[k] L^k x, evaluated in the vertex domain by Horner's rule with
/// sparse Laplacian applications.
SignalMatrix poly_filter(const Graph& g, std::span<const double> gammas, const SignalMatrix& x);

/// The same filter evaluated in the spectral domain: Q diag(p(lambda)) Q^T x.
SignalMatrix poly_filter(const SpectralDecomposition& dec, std::span<const double> gammas, const SignalMatrix& x);

} // namespace sgcn

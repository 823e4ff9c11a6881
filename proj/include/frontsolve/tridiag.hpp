#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace frontsolve {

/// Thomas algorithm for a tridiagonal system with constant off-diagonals
/// as produced by the implicit diffusion step:
///
///   (1 + 2*lam) x[0]   - 2*lam x[1]                    = d[0]   (Neumann mirror)
///   -lam x[i-1] + (1 + 2*lam) x[i] - lam x[i+1]        = d[i]
///   -lam x[n-2] + (1 + 2*lam) x[n-1]                   = d[n-1] (Dirichlet 0 beyond)
///
/// The matrix is strictly diagonally dominant for lam >= 0, so no pivoting.
/// Scratch buffers are caller-provided to keep the stepping loop
/// allocation-free.
inline void solve_diffusion_tridiag(double lam, std::span<const double> d,
                                    std::span<double> x,
                                    std::vector<double>& scratch) {
    const std::size_t n = d.size();
    scratch.resize(n);
    const double diag = 1.0 + 2.0 * lam;

    // Forward sweep; row 0 has off-diagonal -2*lam from the mirror node.
    scratch[0] = -2.0 * lam / diag;
    x[0] = d[0] / diag;
    for (std::size_t i = 1; i < n; ++i) {
        const double m = diag + lam * scratch[i - 1];
        scratch[i] = -lam / m;
        x[i] = (d[i] + lam * x[i - 1]) / m;
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        x[i] -= scratch[i] * x[i + 1];
    }
}

} // namespace frontsolve

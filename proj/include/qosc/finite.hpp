#pragma once

#include <complex>
#include <vector>

#include "qosc/numerics.hpp"

namespace qosc {

using CVec = std::vector<std::complex<double>>;

/// Uniform log-price grid carrying the d-point model: points q*sqrt(kappa)
/// for q = -ell..ell, with d = 2*ell + 1 and kappa = 2*pi/d.
struct FiniteGrid {
    int d = 0;
    int ell = 0;
    double kappa = 0.0;
    std::vector<double> points;
};

/// Grid for an odd dimension d >= 3 (throws DomainError otherwise).
FiniteGrid build_grid(int d);

/// Centered discrete Fourier transform
///   (F v)_n = d^{-1/2} sum_k e^{-2 pi i n k / d} v_k,   n, k = -ell..ell.
/// The kernel angle is reduced with exact integer arithmetic (n*k mod d), so
/// F is unitary to machine precision and F^4 = 1 exactly in structure.
CVec finite_fourier(const CVec& v);

/// Inverse (adjoint) of finite_fourier: same kernel with conjugated phase.
CVec finite_fourier_adjoint(const CVec& v);

/// Periodic second difference scaled by the grid step squared:
///   (D2 v)_j = (v_{j+1} - 2 v_j + v_{j-1}) / kappa,
/// indices wrapping modulo d.  This is the discrete kinetic stencil; its
/// eigenvectors are the plane waves e^{2 pi i j k / d} with eigenvalues
/// (2 cos(2 pi j / d) - 2) / kappa.
CVec finite_d2(const FiniteGrid& grid, const CVec& v);

/// Discrete oscillator Hamiltonian H = -(D2 + F D2 F^+)/2.  Because F
/// diagonalizes D2, the second summand is diagonal and the matrix is real
/// symmetric tridiagonal-plus-corners:
///   H(i, i)  = -(d / 4 pi) * 2 (cos(2 pi n_i / d) - 2),   n_i = i - ell,
///   H(i, j)  = -(d / 4 pi)                    for |i - j| in {1, d-1},
/// and zero elsewhere.
Matrix build_hamiltonian(const FiniteGrid& grid);

/// Number of sign changes along the vector, ignoring entries smaller than
/// 1e-9 * max|v_i| in magnitude.  Throws DomainError if every entry is below
/// the threshold (the sign pattern is then undefined).
int alternation_count(const std::vector<double>& v);

/// Eigensystem of the d-point oscillator.  Column m of `harpers` is the m-th
/// mode sampled on the grid: unit Euclidean norm, sign matched to the
/// continuum oscillator eigenfunction, eigenvalue eigenvalues[m] approaching
/// m + 1/2 from below as d grows.
struct FiniteOscillator {
    FiniteGrid grid;
    Matrix hamiltonian;
    std::vector<double> eigenvalues;
    Matrix harpers;
    std::vector<int> alternations;
};

/// Builds and diagonalizes the d-point Hamiltonian, then assigns each
/// eigenvector its mode number m.  H commutes with the centered Fourier
/// transform, so every eigenvector is (numerically) an F-eigenvector with
/// eigenvalue (-i)^f, f in {0..3}; m is recovered as f plus four times the
/// vector's energy rank within its Fourier class, which reproduces the
/// continuum rule i^{-m}.  Cross-checks (mode numbers forming 0..d-1, sign-
/// change counts matching m on the reliable range, nondegenerate spectrum)
/// throw ConsistencyError on failure.
FiniteOscillator diagonalize(int d);

} // namespace qosc
